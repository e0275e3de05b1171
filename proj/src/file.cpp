#include "pncdf/file.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

namespace pncdf {

namespace {

[[noreturn]] void io_fail(const char* op, const std::string& path) {
    throw Error(Err::IoError, std::string(op) + " failed for " + path + ": " + std::strerror(errno));
}

}  // namespace

SharedFile::SharedFile(int fd, std::string path) : fd_(fd), path_(std::move(path)) {}

SharedFile SharedFile::create(const std::string& path) {
    const int fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) throw Error(Err::FileError, "cannot create " + path + ": " + std::strerror(errno));
    return SharedFile(fd, path);
}

SharedFile SharedFile::open(const std::string& path, bool writable) {
    const int fd = ::open(path.c_str(), writable ? O_RDWR : O_RDONLY);
    if (fd < 0) throw Error(Err::FileError, "cannot open " + path + ": " + std::strerror(errno));
    return SharedFile(fd, path);
}

SharedFile::SharedFile(SharedFile&& o) noexcept
    : fd_(std::exchange(o.fd_, -1)),
      path_(std::move(o.path_)),
      reads_(o.reads_.load()),
      writes_(o.writes_.load()),
      bytes_read_(o.bytes_read_.load()),
      bytes_written_(o.bytes_written_.load()) {}

SharedFile& SharedFile::operator=(SharedFile&& o) noexcept {
    if (this != &o) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = std::exchange(o.fd_, -1);
        path_ = std::move(o.path_);
        reads_ = o.reads_.load();
        writes_ = o.writes_.load();
        bytes_read_ = o.bytes_read_.load();
        bytes_written_ = o.bytes_written_.load();
    }
    return *this;
}

SharedFile::~SharedFile() {
    if (fd_ >= 0) ::close(fd_);
}

Bytes SharedFile::pread(std::uint64_t offset, std::uint64_t len) const {
    Bytes buf(len);
    std::uint64_t got = 0;
    while (got < len) {
        const ssize_t n = ::pread(fd_, buf.data() + got, len - got, off_t(offset + got));
        if (n < 0) io_fail("pread", path_);
        if (n == 0) break;  // EOF: short read, caller sees zero-sized tail
        got += std::uint64_t(n);
    }
    buf.resize(got);
    reads_.fetch_add(1, std::memory_order_relaxed);
    bytes_read_.fetch_add(got, std::memory_order_relaxed);
    return buf;
}

void SharedFile::pwrite(std::uint64_t offset, std::span<const std::byte> data) {
    if (data.empty()) return;
    std::uint64_t put = 0;
    while (put < data.size()) {
        const ssize_t n = ::pwrite(fd_, data.data() + put, data.size() - put, off_t(offset + put));
        if (n < 0) io_fail("pwrite", path_);
        put += std::uint64_t(n);
    }
    writes_.fetch_add(1, std::memory_order_relaxed);
    bytes_written_.fetch_add(data.size(), std::memory_order_relaxed);
}

std::uint64_t SharedFile::size() const {
    struct stat st{};
    if (::fstat(fd_, &st) != 0) io_fail("fstat", path_);
    return std::uint64_t(st.st_size);
}

void SharedFile::truncate(std::uint64_t len) {
    if (::ftruncate(fd_, off_t(len)) != 0) io_fail("ftruncate", path_);
}

void SharedFile::flush() {
    if (::fsync(fd_) != 0) io_fail("fsync", path_);
}

IoStats SharedFile::stats() const {
    return {reads_.load(), writes_.load(), bytes_read_.load(), bytes_written_.load()};
}

void SharedFile::reset_stats() {
    reads_ = 0;
    writes_ = 0;
    bytes_read_ = 0;
    bytes_written_ = 0;
}

}  // namespace pncdf
