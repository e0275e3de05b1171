#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pncdf/extent.hpp"
#include "pncdf/file.hpp"
#include "pncdf/group.hpp"

namespace pncdf {

inline constexpr std::uint64_t kDefaultBufferSize = 4 << 20;  // per aggregator

/// File-domain / exchange plan for one collective operation. Identical on
/// every rank (deterministic from the gathered extents and hints).
struct IoPlan {
    struct Domain {
        std::uint64_t lo = 0;
        std::uint64_t hi = 0;  // half open
        int aggregator = 0;
    };
    struct Exchange {
        int source = 0;
        int aggregator = 0;
        Extent range;
    };

    std::vector<std::vector<Extent>> rank_extents;  // merged, per rank
    std::vector<Domain> domains;
    std::vector<Exchange> schedule;
    std::uint64_t buffer_size = kDefaultBufferSize;
};

/// Collective. Gathers every rank's extent list, splits the global byte
/// range into near-equal aggregator file domains, and builds the exchange
/// schedule. Throws OverlapError for overlapping write extents.
IoPlan plan_two_phase(Group& group, int rank, std::vector<Extent> extents, const HintSet& hints,
                      bool for_write);

/// Two-phase collective write: exchange to aggregators, one contiguous
/// file write per maximal run per domain (within the staging buffer).
/// `data` holds this rank's bytes densely, in extent order. Returns bytes
/// written by this rank's request.
std::uint64_t collective_write(Group& group, int rank, SharedFile& file, const IoPlan& plan,
                               std::span<const std::byte> data);

/// Two-phase collective read; returns this rank's bytes densely in extent
/// order.
Bytes collective_read(Group& group, int rank, SharedFile& file, const IoPlan& plan);

/// Uncoordinated positioned I/O, one operation per extent.
std::uint64_t independent_write(SharedFile& file, std::span<const Extent> extents,
                                std::span<const std::byte> data);
Bytes independent_read(SharedFile& file, std::span<const Extent> extents);

}  // namespace pncdf
