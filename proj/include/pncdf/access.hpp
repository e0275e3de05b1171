#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pncdf/extent.hpp"
#include "pncdf/types.hpp"
#include "pncdf/values.hpp"

namespace pncdf {

/// A rectangular (possibly strided, possibly memory-mapped) selection on
/// one variable. For record variables dimension 0 ranges over records.
struct AccessRequest {
    int var_id = -1;
    std::vector<std::uint64_t> start;
    std::vector<std::uint64_t> count;
    std::vector<std::uint64_t> stride;  // empty = all 1
    std::vector<std::uint64_t> imap;    // element strides; empty = row-major on count
};

/// Memory runs relative to a user buffer base, listed in file-selection
/// order (identity maps yield a single sorted run).
struct MemoryLayout {
    struct Run {
        std::uint64_t offset = 0;  // bytes from buffer base
        std::uint64_t length = 0;  // bytes
        bool operator==(const Run&) const = default;
    };
    std::vector<Run> runs;
    std::uint64_t total_bytes = 0;

    static MemoryLayout contiguous(std::uint64_t nbytes) {
        MemoryLayout l;
        if (nbytes > 0) l.runs.push_back({0, nbytes});
        l.total_bytes = nbytes;
        return l;
    }
};

/// Selected file bytes as a sorted, disjoint, adjacency-merged extent
/// list. Throws OutOfBounds / RankMismatch.
std::vector<Extent> flatten_file(const Schema& schema, const AccessRequest& req);

/// Memory-side counterpart; `writing` enables the collision check on
/// maps that alias two selected elements. Throws OverlapError /
/// OutOfBounds / RankMismatch.
MemoryLayout flatten_memory(const Schema& schema, const AccessRequest& req, MemoryType mtype,
                            bool writing = false);

/// Total element count of a selection.
std::uint64_t selection_elems(const AccessRequest& req);

}  // namespace pncdf
