#include "pncdf/dataset.hpp"

#include <algorithm>
#include <cstring>

namespace pncdf {

namespace {

template <class Fn>
Status guarded(Fn&& fn) {
    try {
        fn();
        return Status::good();
    } catch (const Error& e) {
        return Status::from(e);
    } catch (const std::exception& e) {
        return Status{Err::IoError, e.what()};
    }
}

Bytes u64_bytes(std::uint64_t v) {
    Bytes b;
    pack_u64(b, v);
    return b;
}

void pack_string(Bytes& out, const std::string& s) {
    pack_u64(out, s.size());
    const auto* p = reinterpret_cast<const std::byte*>(s.data());
    out.insert(out.end(), p, p + s.size());
}

void pack_attribute(Bytes& out, const Attribute& a) {
    pack_string(out, a.name);
    pack_u64(out, std::uint64_t(a.type));
    pack_string(out, a.chars);
    pack_u64(out, a.numbers.size());
    for (double v : a.numbers) pack_u64(out, std::bit_cast<std::uint64_t>(v));
}

void check_att_values(const Attribute& a) {
    if (a.type == ExternalType::CHAR) {
        if (!a.numbers.empty())
            throw Error(Err::TypeMismatch, "CHAR attribute carries numeric values");
        return;
    }
    if (!a.chars.empty())
        throw Error(Err::TypeMismatch, "numeric attribute carries text payload");
    // Representability check; throws RangeError.
    encode_values(a.type, MemoryType::F64, a.numbers.data(), a.numbers.size());
}

}  // namespace

std::uint64_t schema_digest(const Schema& s) {
    Bytes b;
    pack_u64(b, s.dimensions.size());
    for (const Dimension& d : s.dimensions) {
        pack_string(b, d.name);
        pack_u64(b, d.length);
        pack_u64(b, d.is_unlimited ? 1 : 0);
    }
    pack_u64(b, s.global_attributes.size());
    for (const Attribute& a : s.global_attributes) pack_attribute(b, a);
    pack_u64(b, s.variables.size());
    for (const Variable& v : s.variables) {
        pack_string(b, v.name);
        pack_u64(b, std::uint64_t(v.type));
        pack_u64(b, v.dim_ids.size());
        for (int d : v.dim_ids) pack_u64(b, std::uint64_t(d));
        pack_u64(b, v.attributes.size());
        for (const Attribute& a : v.attributes) pack_attribute(b, a);
    }
    return fnv1a(b);
}

// ---------------------------------------------------------------- lifecycle

Status Dataset::create(Group& group, int rank, const std::string& path, HintSet hints,
                       Dataset* out) {
    return guarded([&] {
        Bytes digest;
        pack_string(digest, "create:" + path);
        if (!group.all_match(rank, digest))
            throw Error(Err::CollectiveMismatch, "create arguments differ across ranks");

        std::shared_ptr<SharedFile> file;
        if (rank == Group::root)
            file = std::make_shared<SharedFile>(SharedFile::create(path));
        auto shared = group.share(rank, file);
        if (!shared) throw Error(Err::FileError, "root failed to create " + path);

        Dataset ds;
        ds.group_ = &group;
        ds.rank_ = rank;
        ds.file_ = std::static_pointer_cast<SharedFile>(shared);
        ds.path_ = path;
        ds.hints_ = std::move(hints);
        ds.mode_ = DatasetMode::Define;
        *out = std::move(ds);
    });
}

Status Dataset::open(Group& group, int rank, const std::string& path, HintSet hints,
                     Dataset* out) {
    return guarded([&] {
        Bytes digest;
        pack_string(digest, "open:" + path);
        if (!group.all_match(rank, digest))
            throw Error(Err::CollectiveMismatch, "open arguments differ across ranks");

        // Root fetches the header once and broadcasts the raw bytes;
        // every rank decodes into its local cache.
        std::shared_ptr<SharedFile> file;
        Bytes wire;
        if (rank == Group::root) {
            try {
                file = std::make_shared<SharedFile>(SharedFile::open(path));
                std::uint64_t want = std::min<std::uint64_t>(file->size(), 64 << 10);
                Bytes header = file->pread(0, want);
                for (;;) {
                    try {
                        decode_header(header);
                        break;
                    } catch (const Error& e) {
                        if (e.code() == Err::TruncatedHeader && header.size() < file->size()) {
                            want = std::min(file->size(), want * 2);
                            header = file->pread(0, want);
                            continue;
                        }
                        throw;
                    }
                }
                wire.push_back(std::byte{0});
                wire.insert(wire.end(), header.begin(), header.end());
            } catch (const Error& e) {
                wire.assign(1, std::byte{1});
                pack_u64(wire, std::uint64_t(e.code()));
                pack_u64(wire, e.offset());
                pack_string(wire, e.what());
            }
        }
        wire = group.broadcast(rank, std::move(wire));
        if (wire.at(0) == std::byte{1}) {
            std::size_t pos = 1;
            const auto code = Err(unpack_u64(wire, pos));
            const auto offset = unpack_u64(wire, pos);
            const auto len = unpack_u64(wire, pos);
            std::string msg(reinterpret_cast<const char*>(wire.data() + pos), len);
            throw Error(code, msg, offset);
        }

        Dataset ds;
        ds.group_ = &group;
        ds.rank_ = rank;
        ds.schema_ = decode_header({wire.data() + 1, wire.size() - 1});
        ds.disk_schema_ = ds.schema_;
        auto shared = group.share(rank, file);
        ds.file_ = std::static_pointer_cast<SharedFile>(shared);
        if (!ds.file_) throw Error(Err::FileError, "root failed to open " + path);
        ds.path_ = path;
        ds.hints_ = std::move(hints);
        ds.mode_ = DatasetMode::Data;
        *out = std::move(ds);
    });
}

// --------------------------------------------------------------- definition

Status Dataset::def_dim(const std::string& name, std::uint64_t length, int* id) {
    return guarded([&] {
        if (mode_ != DatasetMode::Define)
            throw Error(Err::NotInDefineMode, "def_dim requires define mode");
        if (name.empty() || name.find('\0') != std::string::npos)
            throw Error(Err::BadDimension, "invalid dimension name");
        for (const Dimension& d : schema_.dimensions)
            if (d.name == name) throw Error(Err::DuplicateName, "dimension exists: " + name);
        const bool unlimited = (length == kUnlimited);
        if (unlimited && schema_.unlimited_dim_id() >= 0)
            throw Error(Err::BadDimension, "only one unlimited dimension is allowed");
        if (length > 0xffffffffull)
            throw Error(Err::BadDimension, "dimension length exceeds format limit");
        schema_.dimensions.push_back({name, unlimited ? 0 : length, unlimited});
        if (id) *id = int(schema_.dimensions.size()) - 1;
    });
}

Status Dataset::def_var(const std::string& name, ExternalType type,
                        const std::vector<int>& dim_ids, int* id) {
    return guarded([&] {
        if (mode_ != DatasetMode::Define)
            throw Error(Err::NotInDefineMode, "def_var requires define mode");
        if (name.empty() || name.find('\0') != std::string::npos)
            throw Error(Err::BadDimension, "invalid variable name");
        for (const Variable& v : schema_.variables)
            if (v.name == name) throw Error(Err::DuplicateName, "variable exists: " + name);
        const int unlim = schema_.unlimited_dim_id();
        for (std::size_t i = 0; i < dim_ids.size(); ++i) {
            const int d = dim_ids[i];
            if (d < 0 || std::size_t(d) >= schema_.dimensions.size())
                throw Error(Err::BadDimension, "unknown dimension id " + std::to_string(d));
            if (d == unlim && i != 0)
                throw Error(Err::BadDimension,
                            "unlimited dimension must be the most significant");
        }
        Variable v;
        v.name = name;
        v.type = type;
        v.dim_ids = dim_ids;
        v.var_id = int(schema_.variables.size());
        schema_.variables.push_back(std::move(v));
        if (id) *id = int(schema_.variables.size()) - 1;
    });
}

Status Dataset::put_att(int var_id, const Attribute& att) {
    return guarded([&] {
        if (mode_ == DatasetMode::Closed) throw Error(Err::FileError, "dataset closed");
        if (att.name.empty() || att.name.find('\0') != std::string::npos)
            throw Error(Err::BadDimension, "invalid attribute name");
        check_att_values(att);
        auto& atts = var_id == kGlobalAtt
                         ? schema_.global_attributes
                         : (var_id >= 0 && std::size_t(var_id) < schema_.variables.size()
                                ? schema_.variables[std::size_t(var_id)].attributes
                                : throw Error(Err::BadId, "bad variable id"));
        auto it = std::find_if(atts.begin(), atts.end(),
                               [&](const Attribute& a) { return a.name == att.name; });
        if (mode_ == DatasetMode::Data) {
            // Allowed only while the re-encoded header still fits.
            Schema trial = schema_;
            auto& tatts = var_id == kGlobalAtt
                              ? trial.global_attributes
                              : trial.variables[std::size_t(var_id)].attributes;
            auto tit = std::find_if(tatts.begin(), tatts.end(),
                                    [&](const Attribute& a) { return a.name == att.name; });
            if (tit == tatts.end())
                tatts.push_back(att);
            else
                *tit = att;
            if (encoded_header_size(trial) > schema_.data_begin)
                throw Error(Err::NotInDefineMode,
                            "attribute would grow the header beyond data_begin");
            schema_ = std::move(trial);
            header_dirty_ = true;
            return;
        }
        if (it == atts.end())
            atts.push_back(att);
        else
            *it = att;
    });
}

Status Dataset::get_att(int var_id, const std::string& name, Attribute* out) const {
    return guarded([&] {
        const auto& atts = var_id == kGlobalAtt
                               ? schema_.global_attributes
                               : (var_id >= 0 && std::size_t(var_id) < schema_.variables.size()
                                      ? schema_.variables[std::size_t(var_id)].attributes
                                      : throw Error(Err::BadId, "bad variable id"));
        auto it = std::find_if(atts.begin(), atts.end(),
                               [&](const Attribute& a) { return a.name == name; });
        if (it == atts.end()) throw Error(Err::BadId, "no such attribute: " + name);
        *out = *it;
    });
}

Status Dataset::del_att(int var_id, const std::string& name) {
    return guarded([&] {
        if (mode_ != DatasetMode::Define)
            throw Error(Err::NotInDefineMode, "del_att requires define mode");
        auto& atts = var_id == kGlobalAtt
                         ? schema_.global_attributes
                         : (var_id >= 0 && std::size_t(var_id) < schema_.variables.size()
                                ? schema_.variables[std::size_t(var_id)].attributes
                                : throw Error(Err::BadId, "bad variable id"));
        auto it = std::find_if(atts.begin(), atts.end(),
                               [&](const Attribute& a) { return a.name == name; });
        if (it == atts.end()) throw Error(Err::BadId, "no such attribute: " + name);
        atts.erase(it);
    });
}

// ------------------------------------------------------------------ inquiry

Status Dataset::inq_dim(int id, std::string* name, std::uint64_t* length) const {
    return guarded([&] {
        if (id < 0 || std::size_t(id) >= schema_.dimensions.size())
            throw Error(Err::BadDimension, "bad dimension id");
        const Dimension& d = schema_.dimensions[std::size_t(id)];
        if (name) *name = d.name;
        if (length) *length = d.is_unlimited ? schema_.numrecs : d.length;
    });
}

Status Dataset::inq_var(int id, std::string* name, ExternalType* type, int* ndims,
                        std::vector<int>* dim_ids) const {
    return guarded([&] {
        if (id < 0 || std::size_t(id) >= schema_.variables.size())
            throw Error(Err::BadId, "bad variable id");
        const Variable& v = schema_.variables[std::size_t(id)];
        if (name) *name = v.name;
        if (type) *type = v.type;
        if (ndims) *ndims = int(v.dim_ids.size());
        if (dim_ids) *dim_ids = v.dim_ids;
    });
}

Status Dataset::inq_varid(const std::string& name, int* id) const {
    return guarded([&] {
        for (const Variable& v : schema_.variables)
            if (v.name == name) {
                *id = v.var_id;
                return;
            }
        throw Error(Err::BadId, "no such variable: " + name);
    });
}

// -------------------------------------------------------- enddef/redef/sync

void Dataset::write_header_root() {
    if (rank_ == Group::root) file_->pwrite(0, encode_header(schema_));
}

void Dataset::fill_records(std::uint64_t from_rec, std::uint64_t to_rec) {
    if (rank_ != Group::root) return;
    for (const Variable& v : schema_.variables) {
        if (!schema_.is_record_var(v)) continue;
        const Bytes pattern = fill_bytes(v.type);
        Bytes slab(v.vsize);
        for (std::uint64_t i = 0; i < slab.size(); ++i) slab[i] = pattern[i % pattern.size()];
        for (std::uint64_t r = from_rec; r < to_rec; ++r)
            file_->pwrite(v.begin + r * schema_.recsize, slab);
    }
}

Status Dataset::finish_define(bool from_redef) {
    return guarded([&] {
        if (mode_ != DatasetMode::Define)
            throw Error(Err::NotInDefineMode, "enddef requires define mode");
        if (!group_->all_match(rank_, u64_bytes(schema_digest(schema_))))
            throw Error(Err::CollectiveMismatch, "schema definitions diverged across ranks");

        const bool disk_has_layout = !disk_schema_.variables.empty() || disk_schema_.data_begin > 0;
        std::uint64_t pad = hints_.get_u64("header_pad", 0);
        if (disk_has_layout) {
            const std::uint64_t grammar = encoded_header_size(schema_);
            if (grammar <= disk_schema_.data_begin) pad = disk_schema_.data_begin - grammar;
        }
        Schema laid;
        try {
            laid = compute_layout(schema_, pad);
        } catch (const Error& e) {
            if (from_redef && e.code() == Err::Overflow)
                throw Error(Err::RelocationOverflow, e.what());
            throw;
        }
        laid.numrecs = schema_.numrecs;

        if (from_redef) {
            // Move existing data to its new offsets: every rank buffers an
            // equal share first, then all ranks write after a barrier, so
            // no write can clobber an unread source.
            struct Move {
                std::uint64_t src, dst, len;
            };
            std::vector<Move> moves;
            for (const Variable& nv : laid.variables) {
                const Variable* ov = nullptr;
                for (const Variable& c : disk_schema_.variables)
                    if (c.name == nv.name) ov = &c;
                if (!ov) continue;
                if (disk_schema_.is_record_var(*ov)) {
                    for (std::uint64_t r = 0; r < schema_.numrecs; ++r) {
                        const std::uint64_t src = ov->begin + r * disk_schema_.recsize;
                        const std::uint64_t dst = nv.begin + r * laid.recsize;
                        if (src != dst) moves.push_back({src, dst, ov->vsize});
                    }
                } else if (ov->begin != nv.begin) {
                    moves.push_back({ov->begin, nv.begin, ov->vsize});
                }
            }
            if (!moves.empty()) {
                std::uint64_t total = 0;
                for (const Move& m : moves) total += m.len;
                const int n = group_->size();
                const std::uint64_t share = (total + std::uint64_t(n) - 1) / std::uint64_t(n);
                const std::uint64_t lo = std::min(total, share * std::uint64_t(rank_));
                const std::uint64_t hi = std::min(total, lo + share);

                std::vector<std::pair<std::uint64_t, Bytes>> staged;  // (dst, bytes)
                std::uint64_t cursor = 0;
                for (const Move& m : moves) {
                    const std::uint64_t clo = std::max(lo, cursor);
                    const std::uint64_t chi = std::min(hi, cursor + m.len);
                    if (clo < chi) {
                        Bytes chunk = file_->pread(m.src + (clo - cursor), chi - clo);
                        chunk.resize(chi - clo);  // sparse holes read as zeros
                        staged.emplace_back(m.dst + (clo - cursor), std::move(chunk));
                    }
                    cursor += m.len;
                }
                group_->barrier(rank_);
                for (auto& [dst, bytes] : staged) file_->pwrite(dst, bytes);
                group_->barrier(rank_);
            }
        }

        const Schema before = schema_;
        schema_ = std::move(laid);
        if (fill_mode_) {
            if (rank_ == Group::root) {
                for (const Variable& v : schema_.variables) {
                    const bool existed = std::any_of(
                        disk_schema_.variables.begin(), disk_schema_.variables.end(),
                        [&](const Variable& c) { return c.name == v.name; });
                    if (existed || schema_.is_record_var(v)) continue;
                    const Bytes pattern = fill_bytes(v.type);
                    Bytes slab(v.vsize);
                    for (std::uint64_t i = 0; i < slab.size(); ++i)
                        slab[i] = pattern[i % pattern.size()];
                    file_->pwrite(v.begin, slab);
                }
            }
            fill_records(0, from_redef ? 0 : schema_.numrecs);
        }
        try {
            write_header_root();
        } catch (...) {
            schema_ = before;
            throw;
        }
        group_->barrier(rank_);
        disk_schema_ = schema_;
        mode_ = DatasetMode::Data;
        in_redef_ = false;
        header_dirty_ = false;
    });
}

Status Dataset::enddef() { return finish_define(in_redef_); }

Status Dataset::redef() {
    Status st = guarded([&] {
        if (mode_ != DatasetMode::Data)
            throw Error(Err::NotInDataMode, "redef requires data mode");
    });
    if (!st.ok()) return st;
    st = sync();
    if (!st.ok()) return st;
    return guarded([&] {
        if (!group_->all_match(rank_, u64_bytes(0x7265646566ull)))
            throw Error(Err::CollectiveMismatch, "redef call sequence diverged");
        mode_ = DatasetMode::Define;
        in_redef_ = true;
    });
}

Status Dataset::sync() {
    return guarded([&] {
        if (mode_ != DatasetMode::Data)
            throw Error(Err::NotInDataMode, "sync requires data mode");
        const auto gathered = group_->all_gather(rank_, u64_bytes(effective_numrecs()));
        std::uint64_t max_recs = schema_.numrecs;
        for (const Bytes& b : gathered) {
            std::size_t pos = 0;
            max_recs = std::max(max_recs, unpack_u64(b, pos));
        }
        if (fill_mode_ && max_recs > disk_schema_.numrecs)
            fill_records(disk_schema_.numrecs, max_recs);
        schema_.numrecs = max_recs;
        numrecs_local_ = 0;
        if (rank_ == Group::root) {
            if (header_dirty_) {
                write_header_root();
            } else if (disk_schema_.numrecs != max_recs) {
                Bytes field;
                put_be32(field, std::uint32_t(max_recs));
                file_->pwrite(kNumrecsOffset, field);
            }
            file_->flush();
        }
        disk_schema_ = schema_;
        header_dirty_ = false;
        group_->barrier(rank_);
    });
}

Status Dataset::close() {
    if (mode_ == DatasetMode::Closed) return Status{Err::FileError, "dataset already closed"};
    Status st;
    if (mode_ == DatasetMode::Define)
        st = enddef();
    if (st.ok() && mode_ == DatasetMode::Data) st = sync();
    mode_ = DatasetMode::Closed;
    file_.reset();
    return st;
}

Status Dataset::set_fill(bool on) {
    return guarded([&] {
        if (mode_ == DatasetMode::Closed) throw Error(Err::FileError, "dataset closed");
        fill_mode_ = on;
    });
}

// -------------------------------------------------------------- data access

std::uint64_t Dataset::effective_numrecs() const {
    return std::max(schema_.numrecs, numrecs_local_);
}

AccessRequest Dataset::build_request(int var_id, const Selection& sel) const {
    AccessRequest req;
    req.var_id = var_id;
    req.start.assign(sel.start.begin(), sel.start.end());
    req.count.assign(sel.count.begin(), sel.count.end());
    req.stride.assign(sel.stride.begin(), sel.stride.end());
    req.imap.assign(sel.imap.begin(), sel.imap.end());
    return req;
}

Status Dataset::uniform_status(Status local) {
    Bytes wire;
    pack_u64(wire, std::uint64_t(local.code));
    pack_string(wire, local.message);
    const auto all = group_->all_gather(rank_, std::move(wire));
    for (std::size_t r = 0; r < all.size(); ++r) {
        std::size_t pos = 0;
        const auto code = Err(unpack_u64(all[r], pos));
        if (code == Err::Ok) continue;
        const auto len = unpack_u64(all[r], pos);
        std::string msg(reinterpret_cast<const char*>(all[r].data() + pos), len);
        return Status{code, "rank " + std::to_string(r) + ": " + msg};
    }
    return Status::good();
}

Status Dataset::access(int var_id, const Selection& sel, const MemoryLayout* flex_layout,
                       MemoryType mtype, const void* put_buf, void* get_buf, bool writing,
                       bool collective) {
    // Direction comes from the API entry point: a zero-count participant
    // may legally pass a null buffer.
    const bool put = writing;

    AccessRequest req;
    std::vector<Extent> extents;
    MemoryLayout layout;
    std::uint64_t nelems = 0;
    ExternalType etype = ExternalType::BYTE;
    bool record = false;
    Status local = guarded([&] {
        if (mode_ != DatasetMode::Data)
            throw Error(Err::NotInDataMode, "data access requires data mode");
        req = build_request(var_id, sel);
        extents = flatten_file(schema_, req);
        const Variable& v = schema_.variables.at(std::size_t(var_id));
        etype = v.type;
        record = schema_.is_record_var(v);
        nelems = req.count.empty()
                     ? 1
                     : (std::any_of(req.count.begin(), req.count.end(),
                                    [](std::uint64_t c) { return c == 0; })
                            ? 0
                            : selection_elems(req));
        if (record && !put && !req.count.empty() && req.count[0] > 0) {
            const std::uint64_t s0 = req.stride.empty() ? 1 : req.stride[0];
            if (req.start[0] + (req.count[0] - 1) * s0 >= effective_numrecs())
                throw Error(Err::OutOfBounds, "read beyond the last record");
        }
        if (nelems > 0 && !(put ? put_buf != nullptr : get_buf != nullptr))
            throw Error(Err::BadId, "null buffer for a non-empty selection");
        if (flex_layout) {
            if (flex_layout->total_bytes != nelems * element_size(mtype))
                throw Error(Err::LayoutMismatch,
                            "memory layout bytes do not match the selection");
            layout = *flex_layout;
        } else {
            layout = flatten_memory(schema_, req, mtype, put);
        }
    });

    if (collective) {
        if (checked_) {
            Bytes d;
            pack_u64(d, std::uint64_t(var_id));
            pack_u64(d, put ? 1 : 0);
            pack_u64(d, flex_layout ? 1 : 0);
            pack_u64(d, sel.start.size());
            // Selections legitimately differ per rank; only the call shape
            // must match.
            if (!group_->all_match(rank_, d))
                local = Status{Err::CollectiveMismatch,
                               "collective data call arguments diverged"};
        }
        local = uniform_status(std::move(local));
        if (!local.ok()) return local;
    } else if (!local.ok()) {
        return local;
    }

    return guarded([&] {
        // Record extension: collective writes settle numrecs immediately;
        // independent writes fold in at sync/close.
        if (record && put && !req.count.empty()) {
            const std::uint64_t s0 = req.stride.empty() ? 1 : req.stride[0];
            const std::uint64_t my_end =
                req.count[0] == 0 ? 0 : req.start[0] + (req.count[0] - 1) * s0 + 1;
            if (collective) {
                const auto gathered = group_->all_gather(rank_, u64_bytes(my_end));
                std::uint64_t max_end = schema_.numrecs;
                for (const Bytes& b : gathered) {
                    std::size_t pos = 0;
                    max_end = std::max(max_end, unpack_u64(b, pos));
                }
                if (max_end > schema_.numrecs) {
                    if (fill_mode_) fill_records(schema_.numrecs, max_end);
                    schema_.numrecs = max_end;
                    group_->barrier(rank_);
                }
            } else {
                numrecs_local_ = std::max(numrecs_local_, my_end);
            }
        }

        const std::uint64_t msize = element_size(mtype);
        if (put) {
            // Gather user memory into file order, convert, hand to the
            // engine. Single-run layouts pass straight through.
            Bytes dense(nelems * msize);
            const auto* base = static_cast<const std::byte*>(put_buf);
            std::uint64_t cursor = 0;
            for (const MemoryLayout::Run& r : layout.runs) {
                std::memcpy(dense.data() + cursor, base + r.offset, r.length);
                cursor += r.length;
            }
            Bytes file_bytes = encode_values(etype, mtype, dense.data(), nelems);
            if (collective) {
                IoPlan plan = plan_two_phase(*group_, rank_, extents, hints_, true);
                collective_write(*group_, rank_, *file_, plan, file_bytes);
            } else {
                independent_write(*file_, extents, file_bytes);
            }
        } else {
            Bytes file_bytes;
            if (collective) {
                IoPlan plan = plan_two_phase(*group_, rank_, extents, hints_, false);
                file_bytes = collective_read(*group_, rank_, *file_, plan);
            } else {
                file_bytes = independent_read(*file_, extents);
            }
            Bytes dense(nelems * msize);
            decode_values(etype, mtype, file_bytes, dense.data());
            auto* base = static_cast<std::byte*>(get_buf);
            std::uint64_t cursor = 0;
            for (const MemoryLayout::Run& r : layout.runs) {
                std::memcpy(base + r.offset, dense.data() + cursor, r.length);
                cursor += r.length;
            }
        }
    });
}

namespace {

std::vector<std::uint64_t> ones(std::size_t n) { return std::vector<std::uint64_t>(n, 1); }

}  // namespace

Status Dataset::put_var1(int var_id, U64s index, MemoryType mtype, const void* value) {
    const auto c = ones(index.size());
    return access(var_id, {index, c, {}, {}}, nullptr, mtype, value, nullptr, true, false);
}
Status Dataset::get_var1(int var_id, U64s index, MemoryType mtype, void* value) {
    const auto c = ones(index.size());
    return access(var_id, {index, c, {}, {}}, nullptr, mtype, nullptr, value, false, false);
}
Status Dataset::put_var(int var_id, MemoryType mtype, const void* buf) {
    if (var_id < 0 || std::size_t(var_id) >= schema_.variables.size())
        return Status{Err::BadId, "bad variable id"};
    const auto shape = schema_.var_shape(schema_.variables[std::size_t(var_id)]);
    const std::vector<std::uint64_t> zeros(shape.size(), 0);
    return access(var_id, {zeros, shape, {}, {}}, nullptr, mtype, buf, nullptr, true, false);
}
Status Dataset::get_var(int var_id, MemoryType mtype, void* buf) {
    if (var_id < 0 || std::size_t(var_id) >= schema_.variables.size())
        return Status{Err::BadId, "bad variable id"};
    const auto shape = schema_.var_shape(schema_.variables[std::size_t(var_id)]);
    const std::vector<std::uint64_t> zeros(shape.size(), 0);
    return access(var_id, {zeros, shape, {}, {}}, nullptr, mtype, nullptr, buf, false, false);
}
Status Dataset::put_vara(int var_id, U64s start, U64s count, MemoryType mtype, const void* buf) {
    return access(var_id, {start, count, {}, {}}, nullptr, mtype, buf, nullptr, true, false);
}
Status Dataset::get_vara(int var_id, U64s start, U64s count, MemoryType mtype, void* buf) {
    return access(var_id, {start, count, {}, {}}, nullptr, mtype, nullptr, buf, false, false);
}
Status Dataset::put_vars(int var_id, U64s start, U64s count, U64s stride, MemoryType mtype,
                         const void* buf) {
    return access(var_id, {start, count, stride, {}}, nullptr, mtype, buf, nullptr, true, false);
}
Status Dataset::get_vars(int var_id, U64s start, U64s count, U64s stride, MemoryType mtype,
                         void* buf) {
    return access(var_id, {start, count, stride, {}}, nullptr, mtype, nullptr, buf, false, false);
}
Status Dataset::put_varm(int var_id, U64s start, U64s count, U64s stride, U64s imap,
                         MemoryType mtype, const void* buf) {
    return access(var_id, {start, count, stride, imap}, nullptr, mtype, buf, nullptr, true, false);
}
Status Dataset::get_varm(int var_id, U64s start, U64s count, U64s stride, U64s imap,
                         MemoryType mtype, void* buf) {
    return access(var_id, {start, count, stride, imap}, nullptr, mtype, nullptr, buf, false, false);
}

Status Dataset::put_var1_all(int var_id, U64s index, MemoryType mtype, const void* value) {
    const auto c = ones(index.size());
    return access(var_id, {index, c, {}, {}}, nullptr, mtype, value, nullptr, true, true);
}
Status Dataset::get_var1_all(int var_id, U64s index, MemoryType mtype, void* value) {
    const auto c = ones(index.size());
    return access(var_id, {index, c, {}, {}}, nullptr, mtype, nullptr, value, false, true);
}
Status Dataset::put_var_all(int var_id, MemoryType mtype, const void* buf) {
    if (var_id < 0 || std::size_t(var_id) >= schema_.variables.size())
        return Status{Err::BadId, "bad variable id"};
    const auto shape = schema_.var_shape(schema_.variables[std::size_t(var_id)]);
    const std::vector<std::uint64_t> zeros(shape.size(), 0);
    return access(var_id, {zeros, shape, {}, {}}, nullptr, mtype, buf, nullptr, true, true);
}
Status Dataset::get_var_all(int var_id, MemoryType mtype, void* buf) {
    if (var_id < 0 || std::size_t(var_id) >= schema_.variables.size())
        return Status{Err::BadId, "bad variable id"};
    const auto shape = schema_.var_shape(schema_.variables[std::size_t(var_id)]);
    const std::vector<std::uint64_t> zeros(shape.size(), 0);
    return access(var_id, {zeros, shape, {}, {}}, nullptr, mtype, nullptr, buf, false, true);
}
Status Dataset::put_vara_all(int var_id, U64s start, U64s count, MemoryType mtype,
                             const void* buf) {
    return access(var_id, {start, count, {}, {}}, nullptr, mtype, buf, nullptr, true, true);
}
Status Dataset::get_vara_all(int var_id, U64s start, U64s count, MemoryType mtype, void* buf) {
    return access(var_id, {start, count, {}, {}}, nullptr, mtype, nullptr, buf, false, true);
}
Status Dataset::put_vars_all(int var_id, U64s start, U64s count, U64s stride, MemoryType mtype,
                             const void* buf) {
    return access(var_id, {start, count, stride, {}}, nullptr, mtype, buf, nullptr, true, true);
}
Status Dataset::get_vars_all(int var_id, U64s start, U64s count, U64s stride, MemoryType mtype,
                             void* buf) {
    return access(var_id, {start, count, stride, {}}, nullptr, mtype, nullptr, buf, false, true);
}
Status Dataset::put_varm_all(int var_id, U64s start, U64s count, U64s stride, U64s imap,
                             MemoryType mtype, const void* buf) {
    return access(var_id, {start, count, stride, imap}, nullptr, mtype, buf, nullptr, true, true);
}
Status Dataset::get_varm_all(int var_id, U64s start, U64s count, U64s stride, U64s imap,
                             MemoryType mtype, void* buf) {
    return access(var_id, {start, count, stride, imap}, nullptr, mtype, nullptr, buf, false, true);
}

Status Dataset::put_vara_all_flex(int var_id, U64s start, U64s count, U64s stride,
                                  const MemoryLayout& layout, MemoryType mtype, const void* buf) {
    return access(var_id, {start, count, stride, {}}, &layout, mtype, buf, nullptr, true, true);
}
Status Dataset::get_vara_all_flex(int var_id, U64s start, U64s count, U64s stride,
                                  const MemoryLayout& layout, MemoryType mtype, void* buf) {
    return access(var_id, {start, count, stride, {}}, &layout, mtype, nullptr, buf, false, true);
}

}  // namespace pncdf
