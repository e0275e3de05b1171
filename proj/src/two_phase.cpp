#include "pncdf/two_phase.hpp"

#include <algorithm>
#include <cstring>

namespace pncdf {

namespace {

Bytes pack_extents(const std::vector<Extent>& extents) {
    Bytes out;
    pack_u64(out, extents.size());
    for (const Extent& e : extents) {
        pack_u64(out, e.offset);
        pack_u64(out, e.length);
    }
    return out;
}

std::vector<Extent> unpack_extents(std::span<const std::byte> b, std::size_t& pos) {
    const std::uint64_t n = unpack_u64(b, pos);
    std::vector<Extent> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t off = unpack_u64(b, pos);
        const std::uint64_t len = unpack_u64(b, pos);
        out.push_back({off, len});
    }
    return out;
}

// Dense-buffer position of a file range within a rank's extent list.
// Extents are sorted and disjoint, so a binary search suffices.
std::uint64_t dense_offset(const std::vector<Extent>& extents, std::uint64_t file_offset) {
    std::uint64_t acc = 0;
    for (const Extent& e : extents) {
        if (file_offset < e.end() && file_offset >= e.offset)
            return acc + (file_offset - e.offset);
        acc += e.length;
    }
    throw Error(Err::IoError, "file offset not covered by extent list");
}

}  // namespace

IoPlan plan_two_phase(Group& group, int rank, std::vector<Extent> extents, const HintSet& hints,
                      bool for_write) {
    IoPlan plan;
    plan.buffer_size = hints.get_u64("buffer_size", kDefaultBufferSize);
    if (plan.buffer_size < 4) plan.buffer_size = 4;

    auto mine = merge_extents(std::move(extents));
    const auto gathered = group.all_gather(rank, pack_extents(mine));

    const int n = group.size();
    plan.rank_extents.resize(std::size_t(n));
    for (int r = 0; r < n; ++r) {
        std::size_t pos = 0;
        plan.rank_extents[std::size_t(r)] = unpack_extents(gathered[std::size_t(r)], pos);
    }

    if (for_write) {
        // Overlapping collective writes are an error, not a race.
        std::vector<Extent> all;
        for (const auto& re : plan.rank_extents) all.insert(all.end(), re.begin(), re.end());
        merge_extents(std::move(all));  // throws OverlapError on conflict
    }

    std::uint64_t lo = UINT64_MAX, hi = 0;
    for (const auto& re : plan.rank_extents)
        for (const Extent& e : re) {
            lo = std::min(lo, e.offset);
            hi = std::max(hi, e.end());
        }
    if (hi <= lo) return plan;  // nothing requested anywhere

    std::uint64_t aggregators = hints.get_u64("aggregators", std::uint64_t(std::min(n, 4)));
    aggregators = std::clamp<std::uint64_t>(aggregators, 1, std::uint64_t(n));
    const std::uint64_t a = aggregators;

    // Near-equal contiguous file domains, boundaries rounded to 4.
    const std::uint64_t step = round_up4((hi - lo + a - 1) / a);
    for (std::uint64_t k = 0; k < a; ++k) {
        const std::uint64_t dlo = lo + k * step;
        if (dlo >= hi) break;
        const std::uint64_t dhi = std::min(hi, dlo + step);
        plan.domains.push_back({dlo, dhi, int(k * std::uint64_t(n) / a)});
    }

    for (int r = 0; r < n; ++r)
        for (const Extent& e : plan.rank_extents[std::size_t(r)])
            for (const IoPlan::Domain& d : plan.domains) {
                const std::uint64_t clo = std::max(e.offset, d.lo);
                const std::uint64_t chi = std::min(e.end(), d.hi);
                if (clo < chi)
                    plan.schedule.push_back({r, d.aggregator, {clo, chi - clo}});
            }
    return plan;
}

std::uint64_t collective_write(Group& group, int rank, SharedFile& file, const IoPlan& plan,
                               std::span<const std::byte> data) {
    const auto& mine = plan.rank_extents[std::size_t(rank)];
    if (data.size() != total_bytes(mine))
        throw Error(Err::LayoutMismatch, "write buffer size does not match extent total");

    // Exchange phase: everyone's dense buffers become visible to the
    // aggregators (modeled as an in-process gather).
    const auto all_data = group.all_gather(rank, Bytes(data.begin(), data.end()));

    // I/O phase: each aggregator assembles its domains and writes one
    // contiguous operation per maximal run, staged through a bounded
    // buffer.
    for (const IoPlan::Domain& dom : plan.domains) {
        if (dom.aggregator != rank) continue;
        struct Piece {
            Extent range;
            int source;
        };
        std::vector<Piece> pieces;
        for (const IoPlan::Exchange& x : plan.schedule)
            if (x.aggregator == rank && x.range.offset >= dom.lo && x.range.end() <= dom.hi)
                pieces.push_back({x.range, x.source});
        std::sort(pieces.begin(), pieces.end(),
                  [](const Piece& p, const Piece& q) { return p.range.offset < q.range.offset; });

        std::size_t i = 0;
        while (i < pieces.size()) {
            // Maximal contiguous run of pieces.
            std::size_t j = i + 1;
            std::uint64_t end = pieces[i].range.end();
            while (j < pieces.size() && pieces[j].range.offset == end) {
                end = pieces[j].range.end();
                ++j;
            }
            const std::uint64_t run_lo = pieces[i].range.offset;
            std::uint64_t pass_lo = run_lo;
            while (pass_lo < end) {
                const std::uint64_t pass_hi = std::min(end, pass_lo + plan.buffer_size);
                Bytes staging(pass_hi - pass_lo);
                for (std::size_t k = i; k < j; ++k) {
                    const std::uint64_t clo = std::max(pieces[k].range.offset, pass_lo);
                    const std::uint64_t chi = std::min(pieces[k].range.end(), pass_hi);
                    if (clo >= chi) continue;
                    const auto& src_extents = plan.rank_extents[std::size_t(pieces[k].source)];
                    const auto& src = all_data[std::size_t(pieces[k].source)];
                    std::memcpy(staging.data() + (clo - pass_lo),
                                src.data() + dense_offset(src_extents, clo), chi - clo);
                }
                file.pwrite(pass_lo, staging);
                pass_lo = pass_hi;
            }
            i = j;
        }
    }

    group.barrier(rank);
    return data.size();
}

Bytes collective_read(Group& group, int rank, SharedFile& file, const IoPlan& plan) {
    // I/O phase first: aggregators read each maximal requested run in
    // their domains once.
    Bytes runs_wire;
    std::uint64_t run_count = 0;
    Bytes payload;
    for (const IoPlan::Domain& dom : plan.domains) {
        if (dom.aggregator != rank) continue;
        std::vector<Extent> wanted;
        for (const IoPlan::Exchange& x : plan.schedule)
            if (x.aggregator == rank && x.range.offset >= dom.lo && x.range.end() <= dom.hi)
                wanted.push_back(x.range);
        // Requests may coincide across ranks on reads; clip to the union.
        std::sort(wanted.begin(), wanted.end());
        std::vector<Extent> union_runs;
        for (const Extent& e : wanted) {
            if (!union_runs.empty() && e.offset <= union_runs.back().end()) {
                union_runs.back().length =
                    std::max(union_runs.back().end(), e.end()) - union_runs.back().offset;
            } else {
                union_runs.push_back(e);
            }
        }
        for (const Extent& run : union_runs) {
            std::uint64_t pass_lo = run.offset;
            while (pass_lo < run.end()) {
                const std::uint64_t pass_hi = std::min(run.end(), pass_lo + plan.buffer_size);
                Bytes chunk = file.pread(pass_lo, pass_hi - pass_lo);
                chunk.resize(pass_hi - pass_lo);  // zero fill past EOF
                pack_u64(runs_wire, pass_lo);
                pack_bytes(runs_wire, chunk);
                ++run_count;
                pass_lo = pass_hi;
            }
        }
    }
    Bytes header;
    pack_u64(header, run_count);
    header.insert(header.end(), runs_wire.begin(), runs_wire.end());

    // Exchange phase: scatter the aggregator runs to every rank.
    const auto all_runs = group.all_gather(rank, std::move(header));

    struct Run {
        std::uint64_t offset;
        std::span<const std::byte> bytes;
    };
    std::vector<Run> runs;
    for (const Bytes& wire : all_runs) {
        std::size_t pos = 0;
        const std::uint64_t n = unpack_u64(wire, pos);
        for (std::uint64_t i = 0; i < n; ++i) {
            const std::uint64_t off = unpack_u64(wire, pos);
            const std::uint64_t len = unpack_u64(wire, pos);
            runs.push_back({off, {wire.data() + pos, len}});
            pos += len;
        }
    }
    std::sort(runs.begin(), runs.end(),
              [](const Run& a, const Run& b) { return a.offset < b.offset; });

    const auto& mine = plan.rank_extents[std::size_t(rank)];
    Bytes out(total_bytes(mine));
    std::uint64_t cursor = 0;
    for (const Extent& e : mine) {
        std::uint64_t need_lo = e.offset;
        while (need_lo < e.end()) {
            auto it = std::partition_point(runs.begin(), runs.end(), [&](const Run& r) {
                return r.offset + r.bytes.size() <= need_lo;
            });
            if (it == runs.end() || it->offset > need_lo)
                throw Error(Err::IoError, "collective read: requested byte not covered by plan");
            const std::uint64_t chi = std::min(e.end(), it->offset + it->bytes.size());
            std::memcpy(out.data() + cursor + (need_lo - e.offset),
                        it->bytes.data() + (need_lo - it->offset), chi - need_lo);
            need_lo = chi;
        }
        cursor += e.length;
    }
    return out;
}

std::uint64_t independent_write(SharedFile& file, std::span<const Extent> extents,
                                std::span<const std::byte> data) {
    std::uint64_t cursor = 0;
    for (const Extent& e : extents) {
        file.pwrite(e.offset, data.subspan(cursor, e.length));
        cursor += e.length;
    }
    if (cursor != data.size())
        throw Error(Err::LayoutMismatch, "write buffer size does not match extent total");
    return cursor;
}

Bytes independent_read(SharedFile& file, std::span<const Extent> extents) {
    Bytes out;
    std::uint64_t total = 0;
    for (const Extent& e : extents) total += e.length;
    out.reserve(total);
    for (const Extent& e : extents) {
        Bytes chunk = file.pread(e.offset, e.length);
        chunk.resize(e.length);  // past-EOF reads fill with zeros
        out.insert(out.end(), chunk.begin(), chunk.end());
    }
    return out;
}

}  // namespace pncdf
