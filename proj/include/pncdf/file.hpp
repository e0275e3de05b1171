#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <string>

#include "pncdf/error.hpp"
#include "pncdf/wire.hpp"

namespace pncdf {

/// Positioned-I/O operation counters; the instrumentation hook used by
/// aggregation and header-protocol assertions.
struct IoStats {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t bytes_read = 0;
    std::uint64_t bytes_written = 0;
};

/// A seekable byte file shared by all ranks of one group. Positioned
/// reads/writes only; concurrent use on disjoint ranges is safe.
class SharedFile {
public:
    static SharedFile create(const std::string& path);  // truncates
    static SharedFile open(const std::string& path, bool writable = true);

    SharedFile(SharedFile&&) noexcept;
    SharedFile& operator=(SharedFile&&) noexcept;
    SharedFile(const SharedFile&) = delete;
    SharedFile& operator=(const SharedFile&) = delete;
    ~SharedFile();

    /// Reads up to len bytes; short only at end of file. Each call counts
    /// as one contiguous operation.
    Bytes pread(std::uint64_t offset, std::uint64_t len) const;
    void pwrite(std::uint64_t offset, std::span<const std::byte> data);

    std::uint64_t size() const;
    void truncate(std::uint64_t len);
    void flush();

    IoStats stats() const;
    void reset_stats();

    const std::string& path() const { return path_; }

private:
    SharedFile(int fd, std::string path);

    int fd_ = -1;
    std::string path_;
    mutable std::atomic<std::uint64_t> reads_{0};
    mutable std::atomic<std::uint64_t> writes_{0};
    mutable std::atomic<std::uint64_t> bytes_read_{0};
    mutable std::atomic<std::uint64_t> bytes_written_{0};
};

}  // namespace pncdf
