#include "pncdf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pncdf/dataset.hpp"

namespace pncdf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<int> pattern_axes(Pattern p) {
    switch (p) {
        case Pattern::Z: return {0};
        case Pattern::Y: return {1};
        case Pattern::X: return {2};
        case Pattern::ZY: return {0, 1};
        case Pattern::ZX: return {0, 2};
        case Pattern::YX: return {1, 2};
        case Pattern::ZYX: return {0, 1, 2};
        case Pattern::BLOCK: return {0};
    }
    throw Error(Err::BadId, "unknown pattern");
}

void check_status(const Status& st, const char* what) {
    if (!st.ok())
        throw Error(st.code, std::string(what) + ": " + st.message);
}

}  // namespace

const char* pattern_name(Pattern p) {
    switch (p) {
        case Pattern::Z: return "Z";
        case Pattern::Y: return "Y";
        case Pattern::X: return "X";
        case Pattern::ZY: return "ZY";
        case Pattern::ZX: return "ZX";
        case Pattern::YX: return "YX";
        case Pattern::ZYX: return "ZYX";
        case Pattern::BLOCK: return "BLOCK";
    }
    return "?";
}

Pattern parse_pattern(const std::string& s) {
    for (Pattern p : {Pattern::Z, Pattern::Y, Pattern::X, Pattern::ZY, Pattern::ZX, Pattern::YX,
                      Pattern::ZYX, Pattern::BLOCK})
        if (s == pattern_name(p)) return p;
    throw Error(Err::BadId, "unknown pattern: " + s);
}

std::vector<int> factor_axes(int n, int naxes) {
    if (n < 1 || naxes < 1) throw Error(Err::BadId, "bad factorization request");
    // Lexicographically smallest non-increasing factor tuple: the most
    // balanced split, larger factors toward the most significant axis.
    std::vector<int> best;
    std::vector<int> current;
    auto rec = [&](auto&& self, int remaining, int axes_left, int cap) -> void {
        if (axes_left == 0) {
            if (remaining == 1 && (best.empty() || current < best)) best = current;
            return;
        }
        for (int f = 1; f <= std::min(cap, remaining); ++f) {
            if (remaining % f != 0) continue;
            current.push_back(f);
            self(self, remaining / f, axes_left - 1, f);
            current.pop_back();
        }
    };
    rec(rec, n, naxes, n);
    if (best.empty()) throw Error(Err::BadId, "cannot factor participant count over axes");
    return best;
}

Subarray partition_subarray(Pattern pattern, const std::vector<std::uint64_t>& shape, int n,
                            int rank) {
    const auto axes = pattern_axes(pattern);
    const auto counts = factor_axes(n, int(axes.size()));

    // Rank to per-axis coordinates, most significant axis slowest.
    std::vector<int> coord(axes.size());
    int rem = rank;
    for (std::size_t i = axes.size(); i > 0; --i) {
        coord[i - 1] = rem % counts[i - 1];
        rem /= counts[i - 1];
    }

    Subarray sub;
    sub.start.assign(shape.begin(), shape.end());
    sub.count.assign(shape.begin(), shape.end());
    for (std::size_t d = 0; d < shape.size(); ++d) {
        sub.start[d] = 0;
        sub.count[d] = shape[d];
    }
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const auto d = std::size_t(axes[i]);
        const auto parts = std::uint64_t(counts[i]);
        const auto c = std::uint64_t(coord[i]);
        const std::uint64_t base = shape[d] / parts;
        const std::uint64_t extra = shape[d] % parts;
        sub.start[d] = c * base + std::min(c, extra);
        sub.count[d] = base + (c < extra ? 1 : 0);
    }
    return sub;
}

std::uint64_t file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Err::FileError, "cannot read " + path);
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        h = fnv1a({reinterpret_cast<const std::byte*>(buf), std::size_t(in.gcount())}, h);
        if (in.eof()) break;
    }
    return h;
}

std::string BenchReport::csv() const {
    std::ostringstream os;
    os << "pattern,n,bytes,phase,seconds,ops\n";
    for (const BenchPhase& p : phases) {
        char sec[32];
        std::snprintf(sec, sizeof sec, "%.6f", p.seconds);
        os << pattern << "," << n << "," << total_bytes << "," << p.name << "," << sec << ","
           << p.ops << "\n";
    }
    return os.str();
}

BenchReport bench_partition(const std::vector<std::uint64_t>& shape, ExternalType etype,
                            Pattern pattern, int n, bool write_mode, const std::string& out_path,
                            std::uint64_t aggregators) {
    if (shape.size() != 3) throw Error(Err::RankMismatch, "partition benchmark expects Z,Y,X");
    if (n < 1 || n > 16) throw Error(Err::BadId, "participant count must be in [1,16]");

    HintSet hints;
    if (aggregators > 0) hints.set("aggregators", std::to_string(aggregators));

    struct RankResult {
        double t_define = 0, t_io = 0, t_close = 0;
        std::uint64_t io_ops = 0;
        bool verified = true;
    };

    const std::uint64_t ny = shape[1], nx = shape[2];
    auto value_at = [&](std::uint64_t z, std::uint64_t y, std::uint64_t x) {
        return double(z * ny * nx + y * nx + x);
    };

    auto results = group_spawn(n, [&](Group& group, int rank) -> RankResult {
        RankResult res;
        auto t0 = Clock::now();
        Dataset ds;
        if (write_mode) {
            check_status(Dataset::create(group, rank, out_path, hints, &ds), "create");
            int dz, dy, dx, var;
            check_status(ds.def_dim("Z", shape[0], &dz), "def_dim");
            check_status(ds.def_dim("Y", shape[1], &dy), "def_dim");
            check_status(ds.def_dim("X", shape[2], &dx), "def_dim");
            check_status(ds.def_var("tt", etype, {dz, dy, dx}, &var), "def_var");
            check_status(ds.enddef(), "enddef");
        } else {
            check_status(Dataset::open(group, rank, out_path, hints, &ds), "open");
        }
        res.t_define = seconds_since(t0);

        const Subarray sub = partition_subarray(pattern, shape, n, rank);
        std::uint64_t mine = 1;
        for (std::uint64_t c : sub.count) mine *= c;

        std::vector<double> buf(mine);
        if (write_mode) {
            std::uint64_t k = 0;
            for (std::uint64_t z = 0; z < sub.count[0]; ++z)
                for (std::uint64_t y = 0; y < sub.count[1]; ++y)
                    for (std::uint64_t x = 0; x < sub.count[2]; ++x)
                        buf[k++] = value_at(sub.start[0] + z, sub.start[1] + y, sub.start[2] + x);
        }

        const IoStats before = ds.file()->stats();
        t0 = Clock::now();
        if (write_mode)
            check_status(ds.put_vara_all(0, sub.start, sub.count, MemoryType::F64, buf.data()),
                         "put_vara_all");
        else
            check_status(ds.get_vara_all(0, sub.start, sub.count, MemoryType::F64, buf.data()),
                         "get_vara_all");
        res.t_io = seconds_since(t0);
        group.barrier(rank);
        const IoStats after = ds.file()->stats();
        res.io_ops = write_mode ? after.writes - before.writes : after.reads - before.reads;

        if (!write_mode) {
            std::uint64_t k = 0;
            for (std::uint64_t z = 0; z < sub.count[0]; ++z)
                for (std::uint64_t y = 0; y < sub.count[1]; ++y)
                    for (std::uint64_t x = 0; x < sub.count[2]; ++x)
                        if (buf[k++] !=
                            value_at(sub.start[0] + z, sub.start[1] + y, sub.start[2] + x))
                            res.verified = false;
        }

        t0 = Clock::now();
        check_status(ds.close(), "close");
        res.t_close = seconds_since(t0);
        return res;
    });

    BenchReport report;
    report.pattern = pattern_name(pattern);
    report.n = n;
    report.shape = shape;
    report.total_bytes = shape[0] * shape[1] * shape[2] * element_size(etype);
    double t_define = 0, t_io = 0, t_close = 0;
    std::uint64_t ops = 0;
    for (const RankResult& r : results) {
        t_define = std::max(t_define, r.t_define);
        t_io = std::max(t_io, r.t_io);
        t_close = std::max(t_close, r.t_close);
        report.verified = report.verified && r.verified;
    }
    // Shared-file counters: every rank saw the same totals; use rank 0's.
    ops = results[0].io_ops;
    report.phases.push_back({write_mode ? "define" : "open", t_define, 0});
    report.phases.push_back({write_mode ? "write" : "read", t_io, ops});
    report.phases.push_back({"close", t_close, 0});
    report.file_digest = file_digest(out_path);
    return report;
}

BenchReport bench_flash(std::uint64_t nxb, std::uint64_t nyb, std::uint64_t nzb,
                        std::uint64_t nblocks, std::uint64_t nvar, int n,
                        const std::string& out_path) {
    if (n < 1 || n > 16) throw Error(Err::BadId, "participant count must be in [1,16]");
    if (nxb == 0 || nyb == 0 || nzb == 0 || nblocks == 0 || nvar == 0)
        throw Error(Err::BadId, "flash parameters must be positive");

    const std::uint64_t block_elems = nzb * nyb * nxb;
    const std::uint64_t total_blocks = nblocks * std::uint64_t(n);

    struct RankResult {
        double t_define = 0, t_io = 0, t_close = 0;
        std::uint64_t io_ops = 0;
        std::vector<double> per_var_seconds;
    };

    auto results = group_spawn(n, [&](Group& group, int rank) -> RankResult {
        RankResult res;
        auto t0 = Clock::now();
        Dataset ds;
        check_status(Dataset::create(group, rank, out_path, {}, &ds), "create");
        int db, dz, dy, dx;
        check_status(ds.def_dim("blocks", total_blocks, &db), "def_dim");
        check_status(ds.def_dim("z", nzb, &dz), "def_dim");
        check_status(ds.def_dim("y", nyb, &dy), "def_dim");
        check_status(ds.def_dim("x", nxb, &dx), "def_dim");
        for (std::uint64_t v = 0; v < nvar; ++v) {
            char name[16];
            std::snprintf(name, sizeof name, "var%03llu", (unsigned long long)v);
            check_status(ds.def_var(name, ExternalType::DOUBLE, {db, dz, dy, dx}, nullptr),
                         "def_var");
        }
        check_status(ds.enddef(), "enddef");
        res.t_define = seconds_since(t0);

        // (Block, *, *, *): rank r owns blocks [r*nblocks, (r+1)*nblocks)
        // of every variable, written from one contiguous buffer.
        const std::uint64_t my_first = std::uint64_t(rank) * nblocks;
        std::vector<double> buf(nblocks * block_elems);
        const std::uint64_t start[4] = {my_first, 0, 0, 0};
        const std::uint64_t count[4] = {nblocks, nzb, nyb, nxb};

        const IoStats before = ds.file()->stats();
        const auto t_all = Clock::now();
        for (std::uint64_t v = 0; v < nvar; ++v) {
            for (std::uint64_t i = 0; i < buf.size(); ++i)
                buf[i] = double(v) * 1000003.0 + double(my_first * block_elems + i);
            t0 = Clock::now();
            check_status(ds.put_vara_all(int(v), start, count, MemoryType::F64, buf.data()),
                         "put_vara_all");
            res.per_var_seconds.push_back(seconds_since(t0));
        }
        res.t_io = seconds_since(t_all);
        group.barrier(rank);
        res.io_ops = ds.file()->stats().writes - before.writes;

        t0 = Clock::now();
        check_status(ds.close(), "close");
        res.t_close = seconds_since(t0);
        return res;
    });

    BenchReport report;
    report.pattern = "BLOCK";
    report.n = n;
    report.shape = {total_blocks, nzb, nyb, nxb};
    report.total_bytes = total_blocks * block_elems * nvar * 8;
    report.phases.push_back({"define", results[0].t_define, 0});
    for (std::uint64_t v = 0; v < nvar; ++v) {
        double t = 0;
        for (const RankResult& r : results) t = std::max(t, r.per_var_seconds[v]);
        char name[24];
        std::snprintf(name, sizeof name, "write:var%03llu", (unsigned long long)v);
        report.phases.push_back({name, t, 0});
    }
    double t_io = 0, t_close = 0;
    for (const RankResult& r : results) {
        t_io = std::max(t_io, r.t_io);
        t_close = std::max(t_close, r.t_close);
    }
    report.phases.push_back({"write_total", t_io, results[0].io_ops});
    report.phases.push_back({"close", t_close, 0});
    report.file_digest = file_digest(out_path);
    return report;
}

}  // namespace pncdf
