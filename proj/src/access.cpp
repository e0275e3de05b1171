#include "pncdf/access.hpp"

#include <algorithm>

namespace pncdf {

namespace {

struct Checked {
    const Variable* var;
    std::size_t rank;
    bool record;
    std::vector<std::uint64_t> stride;  // defaulted
    std::vector<std::uint64_t> dim_len;  // full lengths, record dim = 0 marker
};

Checked check_request(const Schema& schema, const AccessRequest& req) {
    if (req.var_id < 0 || std::size_t(req.var_id) >= schema.variables.size())
        throw Error(Err::BadId, "bad variable id " + std::to_string(req.var_id));
    const Variable& v = schema.variables[std::size_t(req.var_id)];
    const std::size_t rank = v.dim_ids.size();
    if (req.start.size() != rank || req.count.size() != rank)
        throw Error(Err::RankMismatch, "start/count rank != variable rank for " + v.name);
    if (!req.stride.empty() && req.stride.size() != rank)
        throw Error(Err::RankMismatch, "stride rank != variable rank for " + v.name);

    Checked c;
    c.var = &v;
    c.rank = rank;
    c.record = schema.is_record_var(v);
    c.stride = req.stride.empty() ? std::vector<std::uint64_t>(rank, 1) : req.stride;
    for (std::uint64_t s : c.stride)
        if (s < 1) throw Error(Err::OutOfBounds, "stride must be >= 1");

    c.dim_len.resize(rank);
    for (std::size_t i = 0; i < rank; ++i) {
        const Dimension& d = schema.dimensions.at(std::size_t(v.dim_ids[i]));
        c.dim_len[i] = d.length;
        if (req.count[i] == 0) continue;
        const std::uint64_t last = req.start[i] + (req.count[i] - 1) * c.stride[i];
        // The record dimension has no upper bound (writes extend it).
        if (!(c.record && i == 0) && last >= d.length)
            throw Error(Err::OutOfBounds, "selection exceeds dimension " + d.name + " of " + v.name);
    }
    return c;
}

bool empty_selection(const AccessRequest& req) {
    return std::any_of(req.count.begin(), req.count.end(),
                       [](std::uint64_t c) { return c == 0; });
}

// Walks the selection in file (row-major) order, invoking fn(index vector).
template <class Fn>
void for_each_index(const std::vector<std::uint64_t>& count, Fn&& fn) {
    const std::size_t rank = count.size();
    std::vector<std::uint64_t> idx(rank, 0);
    while (true) {
        fn(idx);
        std::size_t i = rank;
        while (i > 0) {
            --i;
            if (++idx[i] < count[i]) break;
            idx[i] = 0;
            if (i == 0) return;
        }
        if (rank == 0) return;
    }
}

}  // namespace

std::uint64_t selection_elems(const AccessRequest& req) {
    std::uint64_t n = 1;
    for (std::uint64_t c : req.count) n *= c;
    return n;
}

std::vector<Extent> flatten_file(const Schema& schema, const AccessRequest& req) {
    const Checked c = check_request(schema, req);
    if (empty_selection(req)) return {};
    const Variable& v = *c.var;
    const std::uint64_t esize = element_size(v.type);

    if (c.rank == 0) return {{v.begin, esize}};

    // Row-major element strides over the full variable shape; for record
    // variables dimension 0 strides by recsize records.
    std::vector<std::uint64_t> byte_stride(c.rank);
    std::uint64_t acc = esize;
    for (std::size_t i = c.rank; i > 0; --i) {
        byte_stride[i - 1] = acc;
        acc *= c.dim_len[i - 1];
    }
    if (c.record) byte_stride[0] = schema.recsize;

    // One run per innermost span; unit stride in the last dimension gives
    // count[last] contiguous elements.
    // The tail only packs contiguously when its byte stride is one element;
    // a rank-1 record variable strides by recsize instead.
    const std::size_t last = c.rank - 1;
    const bool contiguous_tail = c.stride[last] == 1 && byte_stride[last] == esize;
    const std::uint64_t run_len = contiguous_tail ? req.count[last] * esize : esize;

    std::vector<std::uint64_t> outer_count(req.count.begin(), req.count.end() - 1);
    std::vector<Extent> extents;
    for_each_index(outer_count, [&](const std::vector<std::uint64_t>& idx) {
        std::uint64_t base = v.begin;
        for (std::size_t i = 0; i + 1 < c.rank; ++i)
            base += (req.start[i] + idx[i] * c.stride[i]) * byte_stride[i];
        if (contiguous_tail) {
            extents.push_back({base + req.start[last] * byte_stride[last], run_len});
        } else {
            for (std::uint64_t k = 0; k < req.count[last]; ++k)
                extents.push_back(
                    {base + (req.start[last] + k * c.stride[last]) * byte_stride[last], run_len});
        }
    });
    return merge_extents(std::move(extents));
}

MemoryLayout flatten_memory(const Schema& schema, const AccessRequest& req, MemoryType mtype,
                            bool writing) {
    const Checked c = check_request(schema, req);
    const std::uint64_t msize = element_size(mtype);
    const std::uint64_t nelems = empty_selection(req) ? 0 : selection_elems(req);

    MemoryLayout layout;
    layout.total_bytes = nelems * msize;
    if (nelems == 0) return layout;

    std::vector<std::uint64_t> imap = req.imap;
    if (imap.empty()) {
        // Identity: row-major strides of count.
        imap.resize(c.rank);
        std::uint64_t acc = 1;
        for (std::size_t i = c.rank; i > 0; --i) {
            imap[i - 1] = acc;
            acc *= req.count[i - 1];
        }
    } else if (imap.size() != c.rank) {
        throw Error(Err::RankMismatch, "imap rank != variable rank");
    }

    if (c.rank == 0) {
        layout.runs.push_back({0, msize});
        return layout;
    }

    // Emit runs in file-selection order, coalescing only consecutive
    // elements; identity maps collapse to a single run.
    for_each_index(req.count, [&](const std::vector<std::uint64_t>& idx) {
        std::uint64_t off = 0;
        for (std::size_t i = 0; i < c.rank; ++i) off += idx[i] * imap[i];
        off *= msize;
        if (!layout.runs.empty() && layout.runs.back().offset + layout.runs.back().length == off)
            layout.runs.back().length += msize;
        else
            layout.runs.push_back({off, msize});
    });

    if (writing) {
        // A map sending two selected elements to one offset is only legal
        // when reading the buffer.
        auto sorted = layout.runs;
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            return a.offset < b.offset;
        });
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i].offset < sorted[i - 1].offset + sorted[i - 1].length)
                throw Error(Err::OverlapError, "imap aliases selected elements in memory");
    }
    return layout;
}

}  // namespace pncdf
