#include "pncdf/extent.hpp"

#include <algorithm>
#include <numeric>

namespace pncdf {

std::vector<Extent> merge_extents(std::vector<Extent> extents) {
    std::erase_if(extents, [](const Extent& e) { return e.length == 0; });
    std::sort(extents.begin(), extents.end());
    std::vector<Extent> out;
    out.reserve(extents.size());
    for (const Extent& e : extents) {
        if (!out.empty()) {
            Extent& last = out.back();
            if (e.offset < last.end())
                throw Error(Err::OverlapError,
                            "extents overlap at offset " + std::to_string(e.offset));
            if (e.offset == last.end()) {
                last.length += e.length;
                continue;
            }
        }
        out.push_back(e);
    }
    return out;
}

std::uint64_t total_bytes(const std::vector<Extent>& extents) {
    return std::accumulate(extents.begin(), extents.end(), std::uint64_t{0},
                           [](std::uint64_t acc, const Extent& e) { return acc + e.length; });
}

}  // namespace pncdf
