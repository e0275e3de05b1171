#pragma once

#include <cstdint>
#include <vector>

#include "pncdf/error.hpp"

namespace pncdf {

/// (file offset, length) in bytes; the atom of all I/O planning.
struct Extent {
    std::uint64_t offset = 0;
    std::uint64_t length = 0;

    std::uint64_t end() const { return offset + length; }
    bool operator==(const Extent&) const = default;
    auto operator<=>(const Extent&) const = default;
};

/// Canonicalize: sort, drop empties, merge adjacency. Throws OverlapError
/// on overlapping input. Total bytes are preserved.
std::vector<Extent> merge_extents(std::vector<Extent> extents);

std::uint64_t total_bytes(const std::vector<Extent>& extents);

}  // namespace pncdf
