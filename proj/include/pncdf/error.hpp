#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pncdf {

enum class Err {
    Ok = 0,
    // header grammar
    BadMagic,
    TruncatedHeader,
    UnsupportedVersion,
    MalformedName,
    InconsistentOffsets,
    InvalidSchema,
    HeaderOverflow,
    Overflow,
    // value conversion
    RangeError,
    TypeMismatch,
    // access patterns
    OutOfBounds,
    RankMismatch,
    OverlapError,
    LayoutMismatch,
    // collective protocol
    CollectiveMismatch,
    CollectiveTimeout,
    // dataset state machine
    NotInDefineMode,
    NotInDataMode,
    DuplicateName,
    BadDimension,
    BadId,
    RelocationOverflow,
    // I/O
    IoError,
    FileError,
};

const char* err_name(Err e);

/// Exception carrying an error code and, for decode failures, the byte
/// offset at which the input became invalid.
class Error : public std::runtime_error {
public:
    Error(Err code, std::string msg, std::uint64_t offset = 0)
        : std::runtime_error(std::move(msg)), code_(code), offset_(offset) {}

    Err code() const noexcept { return code_; }
    std::uint64_t offset() const noexcept { return offset_; }

private:
    Err code_;
    std::uint64_t offset_;
};

/// Per-call result used by the dataset API, mirroring the serial
/// status-code convention. Core modules throw Error; the dataset layer
/// converts.
struct Status {
    Err code = Err::Ok;
    std::string message;

    bool ok() const noexcept { return code == Err::Ok; }
    explicit operator bool() const noexcept { return ok(); }

    static Status good() { return {}; }
    static Status from(const Error& e) { return {e.code(), e.what()}; }
};

}  // namespace pncdf
