// One test case per acceptance criterion; each prints a pass/fail line.
#include <doctest.h>

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "gen.hpp"
#include "oracles.hpp"
#include "pncdf/bench.hpp"
#include "pncdf/dataset.hpp"
#include "pncdf/dump.hpp"

using namespace pncdf;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const char* name) {
        path = std::string("/tmp/pncdf_acc_") + name + "_" + std::to_string(::getpid());
    }
    ~TempFile() { std::remove(path.c_str()); }
};

struct Verdict {
    int criterion;
    const char* title;
    bool ok = true;
    ~Verdict() {
        std::printf("criterion %d (%s): %s\n", criterion, title, ok ? "PASS" : "FAIL");
        std::fflush(stdout);
    }
    void require(bool cond) {
        if (!cond) ok = false;
        CHECK(cond);
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TEST_CASE("criterion 1: format round-trip property") {
    Verdict v{1, "format round-trip"};
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    for (int iter = 0; iter < 1000; ++iter) {
        Schema s = testgen::random_schema(rng);
        Bytes b = encode_header(s);
        Schema back = decode_header(b);
        if (!(back == s)) {
            v.require(false);
            break;
        }
        if (encode_header(back) != b) {
            v.require(false);
            break;
        }
    }
    v.require(seconds_since(t0) < 30.0);
}

TEST_CASE("criterion 2: flattening matches brute-force enumeration") {
    Verdict v{2, "flattening oracle"};
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(202);
    auto rint = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    int failures = 0;
    for (int iter = 0; iter < 10000; ++iter) {
        Schema s;
        const int rank = rint(0, 4);
        const bool rec = rank > 0 && rint(0, 3) == 0;
        for (int d = 0; d < rank; ++d) {
            Dimension dim;
            dim.name = "d" + std::to_string(d);
            dim.is_unlimited = rec && d == 0;
            dim.length = dim.is_unlimited ? 0 : std::uint64_t(rint(1, 5));
            s.dimensions.push_back(dim);
        }
        Variable var;
        var.name = "v";
        var.type = ExternalType(rint(1, 6));
        for (int d = 0; d < rank; ++d) var.dim_ids.push_back(d);
        var.var_id = 0;
        s.variables.push_back(var);
        if (rec && rint(0, 1)) {
            // a sibling record variable makes recsize differ from vsize
            Variable other;
            other.name = "w";
            other.type = ExternalType::DOUBLE;
            other.dim_ids = {0};
            other.var_id = 1;
            s.variables.push_back(other);
        }
        s = compute_layout(std::move(s));

        AccessRequest req;
        req.var_id = 0;
        bool feasible = true;
        for (int d = 0; d < rank; ++d) {
            std::uint64_t len = s.dimensions[std::size_t(d)].length;
            if (len == 0) len = std::uint64_t(rint(1, 5));
            const std::uint64_t st = std::uint64_t(rint(0, int(len) - 1));
            const std::uint64_t sr = std::uint64_t(rint(1, 3));
            const std::uint64_t maxc = (len - 1 - st) / sr + 1;
            const std::uint64_t c = std::uint64_t(rint(0, int(maxc)));
            req.start.push_back(st);
            req.count.push_back(c);
            req.stride.push_back(sr);
        }
        if (!feasible) continue;

        auto got = flatten_file(s, req);
        auto want = testoracle::brute_force_flatten(s, req);
        if (selection_elems(req) == 0) want.clear();
        const std::uint64_t es = element_size(var.type);
        if (got != want || total_bytes(got) != selection_elems(req) * es) ++failures;
    }
    v.require(failures == 0);
    v.require(seconds_since(t0) < 60.0);
}

TEST_CASE("criterion 3: collective writes equal the single-writer file") {
    Verdict v{3, "serial equivalence of collective I/O"};
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::vector<std::uint64_t>> shapes = {{8, 8, 8}, {4, 6, 8}};
    const Pattern patterns[] = {Pattern::Z,  Pattern::Y,  Pattern::X, Pattern::ZY,
                                Pattern::ZX, Pattern::YX, Pattern::ZYX};
    for (const auto& shape : shapes) {
        for (ExternalType etype : {ExternalType::DOUBLE, ExternalType::SHORT}) {
            TempFile base("c3_base");
            const std::uint64_t want =
                bench_partition(shape, etype, Pattern::Z, 1, true, base.path).file_digest;
            for (Pattern p : patterns) {
                for (int n : {1, 2, 4, 8}) {
                    TempFile tmp("c3");
                    BenchReport r = bench_partition(shape, etype, p, n, true, tmp.path);
                    if (r.file_digest != want) {
                        std::printf("  mismatch: shape0=%llu type=%s pattern=%s n=%d\n",
                                    (unsigned long long)shape[0], type_name(etype),
                                    pattern_name(p), n);
                        v.require(false);
                    }
                }
            }
        }
    }
    v.require(seconds_since(t0) < 120.0);
}

TEST_CASE("criterion 4: block-partitioned multi-variable workload") {
    Verdict v{4, "FLASH-like equivalence"};
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t nblocks = 80, nvar = 24;
    for (int n : {1, 2, 4}) {
        TempFile par("c4_par"), ser("c4_ser");
        BenchReport r = bench_flash(8, 8, 8, nblocks, nvar, n, par.path);
        // data-section size straight from the parameters
        Schema s;
        {
            SharedFile f = SharedFile::open(par.path, false);
            s = decode_header(f.pread(0, std::min<std::uint64_t>(f.size(), 1 << 16)));
            const std::uint64_t data_bytes = f.size() - s.data_begin;
            v.require(data_bytes == nblocks * std::uint64_t(n) * nvar * 512 * 8);
        }
        // digest matches the serial run of the same global array
        BenchReport serial = bench_flash(8, 8, 8, nblocks * std::uint64_t(n), nvar, 1, ser.path);
        v.require(r.file_digest == serial.file_digest);
        (void)r;
    }
    v.require(seconds_since(t0) < 120.0);
}

TEST_CASE("criterion 5: aggregation op counts") {
    Verdict v{5, "aggregation property"};
    // contiguous union with one aggregator: exactly one operation
    {
        TempFile tmp("c5_z");
        BenchReport r = bench_partition({8, 8, 8}, ExternalType::DOUBLE, Pattern::Z, 4, true,
                                        tmp.path, 1);
        std::uint64_t write_ops = 0;
        for (const auto& ph : r.phases)
            if (ph.name == "write") write_ops = ph.ops;
        v.require(write_ops == 1);
    }
    // pattern Y on tt(8,8,8), N=4: collective ops below the 8-per-rank naive count
    {
        TempFile tmp("c5_y");
        BenchReport r =
            bench_partition({8, 8, 8}, ExternalType::DOUBLE, Pattern::Y, 4, true, tmp.path);
        std::uint64_t write_ops = 0;
        for (const auto& ph : r.phases)
            if (ph.name == "write") write_ops = ph.ops;
        const std::uint64_t independent_ops = 8 * 4;
        v.require(write_ops > 0);
        v.require(write_ops < independent_ops);
    }
}

TEST_CASE("criterion 6: one header read at open, zero-cost inquiry") {
    Verdict v{6, "header protocol"};
    TempFile tmp("c6");
    group_spawn(1, [&](Group& g, int rank) {
        Dataset ds;
        REQUIRE(Dataset::create(g, rank, tmp.path, {}, &ds).ok());
        REQUIRE(ds.def_dim("x", 4).ok());
        REQUIRE(ds.def_var("v", ExternalType::INT, {0}).ok());
        REQUIRE(ds.enddef().ok());
        REQUIRE(ds.close().ok());
        return 0;
    });
    auto oks = group_spawn(8, [&](Group& g, int rank) {
        Dataset ds;
        if (!Dataset::open(g, rank, tmp.path, {}, &ds).ok()) return false;
        bool ok = ds.file()->stats().reads == 1 && ds.file()->stats().writes == 0;
        const IoStats before = ds.file()->stats();
        const std::uint64_t collectives = g.collective_count();
        ok = ok && ds.inq_ndims() == 1 && ds.inq_nvars() == 1;
        int id = -1;
        ok = ok && ds.inq_varid("v", &id).ok() && id == 0;
        std::string name;
        std::uint64_t len = 0;
        ok = ok && ds.inq_dim(0, &name, &len).ok() && len == 4;
        g.barrier(rank);  // settle before sampling the shared counters
        const IoStats after = ds.file()->stats();
        ok = ok && after.reads == before.reads && after.writes == before.writes;
        ok = ok && g.collective_count() == collectives + 1;  // only our barrier
        ds.close();
        return ok;
    });
    for (bool ok : oks) v.require(ok);
}

TEST_CASE("criterion 7: divergence is caught at enddef, file untouched") {
    Verdict v{7, "define-mode consistency"};
    TempFile tmp("c7");
    group_spawn(2, [&](Group& g, int rank) {
        Dataset ds;
        REQUIRE(Dataset::create(g, rank, tmp.path, {}, &ds).ok());
        REQUIRE(ds.def_dim("x", 2).ok());
        REQUIRE(ds.def_var("keep", ExternalType::INT, {0}).ok());
        REQUIRE(ds.enddef().ok());
        REQUIRE(ds.close().ok());
        return 0;
    });
    const std::uint64_t digest_before = file_digest(tmp.path);
    auto codes = group_spawn(2, [&](Group& g, int rank) {
        Dataset ds;
        REQUIRE(Dataset::open(g, rank, tmp.path, {}, &ds).ok());
        REQUIRE(ds.redef().ok());
        REQUIRE(ds.def_var(rank == 0 ? "left" : "right", ExternalType::INT, {0}).ok());
        return ds.enddef().code;
    });
    for (Err code : codes) v.require(code == Err::CollectiveMismatch);
    v.require(file_digest(tmp.path) == digest_before);
    v.require(decode_header(SharedFile::open(tmp.path, false)
                                .pread(0, 4096)).variables.size() == 1);
}

TEST_CASE("criterion 8: record interleaving and numrecs") {
    Verdict v{8, "record variables"};
    TempFile tmp("c8");
    std::vector<std::int32_t> a_vals;   // a(time, x4) INT
    std::vector<double> b_vals;         // b(time, x3) DOUBLE
    group_spawn(2, [&](Group& g, int rank) {
        Dataset ds;
        REQUIRE(Dataset::create(g, rank, tmp.path, {}, &ds).ok());
        REQUIRE(ds.def_dim("time", kUnlimited).ok());
        REQUIRE(ds.def_dim("x4", 4).ok());
        REQUIRE(ds.def_dim("x3", 3).ok());
        REQUIRE(ds.def_var("a", ExternalType::INT, {0, 1}).ok());
        REQUIRE(ds.def_var("b", ExternalType::DOUBLE, {0, 2}).ok());
        REQUIRE(ds.enddef().ok());
        for (std::uint64_t rec = 0; rec < 3; ++rec) {
            std::int32_t av[4];
            double bv[3];
            for (int i = 0; i < 4; ++i) av[i] = std::int32_t(rec * 100 + std::uint64_t(i));
            for (int i = 0; i < 3; ++i) bv[i] = double(rec) + i * 0.5;
            std::uint64_t start[2] = {rec, 0};
            std::uint64_t ca[2] = {1, 4}, cb[2] = {1, 3};
            std::uint64_t zero[2] = {0, 0};
            // rank 0 supplies the data; rank 1 participates empty
            REQUIRE(ds.put_vara_all(0, start, rank == 0 ? ca : zero, MemoryType::I32,
                                    rank == 0 ? av : nullptr).ok());
            REQUIRE(ds.put_vara_all(1, start, rank == 0 ? cb : zero, MemoryType::F64,
                                    rank == 0 ? bv : nullptr).ok());
            if (rank == 0) {
                for (int i = 0; i < 4; ++i) a_vals.push_back(av[i]);
                for (int i = 0; i < 3; ++i) b_vals.push_back(bv[i]);
            }
        }
        REQUIRE(ds.close().ok());
        return 0;
    });

    SharedFile f = SharedFile::open(tmp.path, false);
    Schema s = decode_header(f.pread(0, std::min<std::uint64_t>(f.size(), 4096)));
    v.require(s.numrecs == 3);
    REQUIRE(s.variables.size() == 2);
    const Variable& a = s.variables[0];
    const Variable& b = s.variables[1];
    for (std::uint64_t rec = 0; rec < 3; ++rec) {
        Bytes want_a = encode_values(ExternalType::INT, MemoryType::I32,
                                     a_vals.data() + rec * 4, 4);
        v.require(f.pread(a.begin + rec * s.recsize, 16) == want_a);
        Bytes want_b = encode_values(ExternalType::DOUBLE, MemoryType::F64,
                                     b_vals.data() + rec * 3, 3);
        v.require(f.pread(b.begin + rec * s.recsize, 24) == want_b);
    }
}

TEST_CASE("criterion 9: external-reader interop is exercised separately") {
    std::printf("criterion 9 (interop): covered by the non-gating interop test\n");
    std::fflush(stdout);
}
