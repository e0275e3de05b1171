#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pncdf/access.hpp"
#include "pncdf/file.hpp"
#include "pncdf/group.hpp"
#include "pncdf/header.hpp"
#include "pncdf/two_phase.hpp"
#include "pncdf/values.hpp"

namespace pncdf {

/// var_id addressing the global attribute list.
inline constexpr int kGlobalAtt = -1;

enum class DatasetMode { Define, Data, Closed };

/// One rank's view of a collectively opened dataset. Lifecycle and
/// definition calls are collective; data access comes in independent and
/// `_all` collective variants. Errors are reported as per-call Status
/// codes, delivered uniformly to all ranks for collective calls.
class Dataset {
public:
    using U64s = std::span<const std::uint64_t>;

    Dataset() = default;
    Dataset(Dataset&&) = default;
    Dataset& operator=(Dataset&&) = default;

    /// Collective. create starts empty in define mode; open has the root
    /// fetch the header, broadcasts it, and leaves every rank with a
    /// local cache in data mode.
    static Status create(Group& group, int rank, const std::string& path, HintSet hints,
                         Dataset* out);
    static Status open(Group& group, int rank, const std::string& path, HintSet hints,
                       Dataset* out);

    // --- definition (define mode; collective, divergence caught at enddef) ---
    Status def_dim(const std::string& name, std::uint64_t length, int* id = nullptr);
    Status def_var(const std::string& name, ExternalType type, const std::vector<int>& dim_ids,
                   int* id = nullptr);
    Status put_att(int var_id, const Attribute& att);
    Status get_att(int var_id, const std::string& name, Attribute* out) const;
    Status del_att(int var_id, const std::string& name);

    // --- inquiry (any mode; local cache only, no I/O, no synchronization) ---
    int inq_ndims() const { return int(schema_.dimensions.size()); }
    int inq_nvars() const { return int(schema_.variables.size()); }
    int inq_unlimdim() const { return schema_.unlimited_dim_id(); }
    std::uint64_t inq_numrecs() const { return schema_.numrecs; }
    Status inq_dim(int id, std::string* name, std::uint64_t* length) const;
    Status inq_var(int id, std::string* name, ExternalType* type, int* ndims,
                   std::vector<int>* dim_ids) const;
    Status inq_varid(const std::string& name, int* id) const;
    const Schema& schema() const { return schema_; }
    DatasetMode mode() const { return mode_; }

    // --- lifecycle (collective) ---
    Status enddef();
    Status redef();
    Status sync();
    Status close();

    /// Fill mode is off by default: unwritten regions read back as zero
    /// bytes. On, newly allocated variable/record space is prefilled.
    Status set_fill(bool on);
    /// Checked mode routes an argument digest through all_match on every
    /// collective data call; off trusts the caller.
    void set_checked(bool on) { checked_ = on; }

    // --- high-level access: put/get x var1/var/vara/vars/varm,
    //     independent and _all collective variants ---
    Status put_var1(int var_id, U64s index, MemoryType mtype, const void* value);
    Status get_var1(int var_id, U64s index, MemoryType mtype, void* value);
    Status put_var(int var_id, MemoryType mtype, const void* buf);
    Status get_var(int var_id, MemoryType mtype, void* buf);
    Status put_vara(int var_id, U64s start, U64s count, MemoryType mtype, const void* buf);
    Status get_vara(int var_id, U64s start, U64s count, MemoryType mtype, void* buf);
    Status put_vars(int var_id, U64s start, U64s count, U64s stride, MemoryType mtype,
                    const void* buf);
    Status get_vars(int var_id, U64s start, U64s count, U64s stride, MemoryType mtype, void* buf);
    Status put_varm(int var_id, U64s start, U64s count, U64s stride, U64s imap, MemoryType mtype,
                    const void* buf);
    Status get_varm(int var_id, U64s start, U64s count, U64s stride, U64s imap, MemoryType mtype,
                    void* buf);

    Status put_var1_all(int var_id, U64s index, MemoryType mtype, const void* value);
    Status get_var1_all(int var_id, U64s index, MemoryType mtype, void* value);
    Status put_var_all(int var_id, MemoryType mtype, const void* buf);
    Status get_var_all(int var_id, MemoryType mtype, void* buf);
    Status put_vara_all(int var_id, U64s start, U64s count, MemoryType mtype, const void* buf);
    Status get_vara_all(int var_id, U64s start, U64s count, MemoryType mtype, void* buf);
    Status put_vars_all(int var_id, U64s start, U64s count, U64s stride, MemoryType mtype,
                        const void* buf);
    Status get_vars_all(int var_id, U64s start, U64s count, U64s stride, MemoryType mtype,
                        void* buf);
    Status put_varm_all(int var_id, U64s start, U64s count, U64s stride, U64s imap,
                        MemoryType mtype, const void* buf);
    Status get_varm_all(int var_id, U64s start, U64s count, U64s stride, U64s imap,
                        MemoryType mtype, void* buf);

    // --- flexible access: caller supplies the memory layout directly ---
    Status put_vara_all_flex(int var_id, U64s start, U64s count, U64s stride,
                             const MemoryLayout& layout, MemoryType mtype, const void* buf);
    Status get_vara_all_flex(int var_id, U64s start, U64s count, U64s stride,
                             const MemoryLayout& layout, MemoryType mtype, void* buf);

    SharedFile* file() { return file_.get(); }
    Group* group() { return group_; }

private:
    struct Selection {
        U64s start, count, stride, imap;
    };
    Status access(int var_id, const Selection& sel, const MemoryLayout* flex_layout,
                  MemoryType mtype, const void* put_buf, void* get_buf, bool writing,
                  bool collective);
    AccessRequest build_request(int var_id, const Selection& sel) const;
    Status uniform_status(Status local);
    Status finish_define(bool from_redef);
    void write_header_root();
    void fill_records(std::uint64_t from_rec, std::uint64_t to_rec);
    std::uint64_t effective_numrecs() const;

    Group* group_ = nullptr;
    int rank_ = -1;
    std::shared_ptr<SharedFile> file_;
    Schema schema_;
    Schema disk_schema_;  // layout currently on disk (relocation, recovery)
    DatasetMode mode_ = DatasetMode::Closed;
    HintSet hints_;
    std::string path_;
    bool fill_mode_ = false;
    bool checked_ = true;
    bool header_dirty_ = false;
    bool in_redef_ = false;
    std::uint64_t numrecs_local_ = 0;  // provisional, independent writes
};

/// Structural digest of a schema (names, types, shapes, attribute
/// payloads); the quantity compared across ranks at enddef.
std::uint64_t schema_digest(const Schema& s);

}  // namespace pncdf
