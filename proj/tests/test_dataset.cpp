#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <numeric>

#include "pncdf/bench.hpp"
#include "pncdf/dataset.hpp"

using namespace pncdf;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const char* name) {
        path = std::string("/tmp/pncdf_ds_") + name + "_" + std::to_string(::getpid());
    }
    ~TempFile() { std::remove(path.c_str()); }
};

#define REQ_OK(expr)                          \
    do {                                      \
        Status st__ = (expr);                 \
        INFO(st__.message);                   \
        REQUIRE(st__.code == Err::Ok);        \
    } while (0)

}  // namespace

TEST_CASE("create, close, reopen: empty schema survives") {
    TempFile tmp("empty");
    group_spawn(4, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::create(g, rank, tmp.path, {}, &ds));
        CHECK(ds.mode() == DatasetMode::Define);
        REQ_OK(ds.enddef());
        REQ_OK(ds.close());
        return 0;
    });
    group_spawn(4, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::open(g, rank, tmp.path, {}, &ds));
        CHECK(ds.inq_ndims() == 0);
        CHECK(ds.inq_nvars() == 0);
        CHECK(ds.mode() == DatasetMode::Data);
        REQ_OK(ds.close());
        return 0;
    });
}

TEST_CASE("definition and inquiry") {
    TempFile tmp("def");
    group_spawn(2, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::create(g, rank, tmp.path, {}, &ds));
        int time_id = -1, x_id = -1, var_id = -1;
        REQ_OK(ds.def_dim("time", kUnlimited, &time_id));
        REQ_OK(ds.def_dim("x", 4, &x_id));
        REQ_OK(ds.def_var("tt", ExternalType::DOUBLE, {time_id, x_id}, &var_id));
        CHECK(time_id == 0);
        CHECK(x_id == 1);
        CHECK(var_id == 0);
        CHECK(ds.inq_unlimdim() == 0);
        CHECK(ds.schema().is_record_var(ds.schema().variables[0]));

        int found = -1;
        REQ_OK(ds.inq_varid("tt", &found));
        CHECK(found == 0);
        std::string name;
        ExternalType type{};
        int ndims = 0;
        std::vector<int> dim_ids;
        REQ_OK(ds.inq_var(0, &name, &type, &ndims, &dim_ids));
        CHECK(name == "tt");
        CHECK(type == ExternalType::DOUBLE);
        CHECK(ndims == 2);
        CHECK(dim_ids == std::vector<int>{0, 1});

        CHECK(ds.def_dim("x", 9).code == Err::DuplicateName);
        CHECK(ds.def_var("bad", ExternalType::INT, {x_id, time_id}).code == Err::BadDimension);
        REQ_OK(ds.enddef());
        CHECK(ds.def_dim("late", 2).code == Err::NotInDefineMode);
        REQ_OK(ds.close());
        return 0;
    });
}

TEST_CASE("attributes: define mode, data mode, and growth limits") {
    TempFile tmp("att");
    group_spawn(2, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::create(g, rank, tmp.path, {}, &ds));
        Attribute title;
        title.name = "title";
        title.type = ExternalType::CHAR;
        title.chars = "demo";
        REQ_OK(ds.put_att(kGlobalAtt, title));
        REQ_OK(ds.enddef());

        Attribute got;
        REQ_OK(ds.get_att(kGlobalAtt, "title", &got));
        CHECK(got.chars == "demo");

        // same-size overwrite fits in place; a longer one does not
        title.chars = "emod";
        REQ_OK(ds.put_att(kGlobalAtt, title));
        Attribute big;
        big.name = "grown";
        big.type = ExternalType::DOUBLE;
        big.numbers.assign(64, 1.0);
        CHECK(ds.put_att(kGlobalAtt, big).code == Err::NotInDefineMode);
        REQ_OK(ds.close());
        return 0;
    });
}

TEST_CASE("whole-array write, point read-back, reopen intact") {
    TempFile tmp("whole");
    std::vector<double> buf(24);
    std::iota(buf.begin(), buf.end(), 0.0);
    group_spawn(2, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::create(g, rank, tmp.path, {}, &ds));
        REQ_OK(ds.def_dim("Z", 2));
        REQ_OK(ds.def_dim("Y", 3));
        REQ_OK(ds.def_dim("X", 4));
        int vid = -1;
        REQ_OK(ds.def_var("tt", ExternalType::DOUBLE, {0, 1, 2}, &vid));
        REQ_OK(ds.enddef());
        // rank 0 writes everything, rank 1 participates with zero counts
        std::uint64_t start[3] = {0, 0, 0};
        std::uint64_t count[3] = {2, 3, 4};
        std::uint64_t zero[3] = {0, 0, 0};
        REQ_OK(ds.put_vara_all(vid, start, rank == 0 ? count : zero, MemoryType::F64,
                               rank == 0 ? buf.data() : nullptr));
        double v = -1;
        std::uint64_t idx[3] = {1, 2, 3};
        REQ_OK(ds.get_var1(vid, idx, MemoryType::F64, &v));
        CHECK(v == 23.0);
        REQ_OK(ds.close());
        return 0;
    });
    group_spawn(1, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::open(g, rank, tmp.path, {}, &ds));
        std::vector<double> back(24, -1);
        REQ_OK(ds.get_var(0, MemoryType::F64, back.data()));
        CHECK(back == buf);
        REQ_OK(ds.close());
        return 0;
    });
}

TEST_CASE("partitioned collective write equals single-writer file") {
    TempFile serial("serial"), parallel("parallel");
    std::vector<double> buf(32);
    std::iota(buf.begin(), buf.end(), 0.0);
    for (int n : {1, 2}) {
        const std::string& path = n == 1 ? serial.path : parallel.path;
        group_spawn(n, [&](Group& g, int rank) {
            Dataset ds;
            REQ_OK(Dataset::create(g, rank, path, {}, &ds));
            REQ_OK(ds.def_dim("Z", 2));
            REQ_OK(ds.def_dim("Y", 4));
            REQ_OK(ds.def_dim("X", 4));
            int vid = -1;
            REQ_OK(ds.def_var("tt", ExternalType::DOUBLE, {0, 1, 2}, &vid));
            REQ_OK(ds.enddef());
            const std::uint64_t zper = std::uint64_t(2 / n);
            std::uint64_t start[3] = {std::uint64_t(rank) * zper, 0, 0};
            std::uint64_t count[3] = {zper, 4, 4};
            REQ_OK(ds.put_vara_all(vid, start, count, MemoryType::F64,
                                   buf.data() + start[0] * 16));
            REQ_OK(ds.close());
            return 0;
        });
    }
    CHECK(file_digest(serial.path) == file_digest(parallel.path));
}

TEST_CASE("record variables extend collectively and fold at close") {
    TempFile tmp("rec");
    group_spawn(2, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::create(g, rank, tmp.path, {}, &ds));
        REQ_OK(ds.def_dim("time", kUnlimited));
        REQ_OK(ds.def_dim("x", 2));
        int vid = -1;
        REQ_OK(ds.def_var("r", ExternalType::INT, {0, 1}, &vid));
        REQ_OK(ds.enddef());
        // each rank writes its own records collectively
        for (std::uint64_t rec = 0; rec < 2; ++rec) {
            std::int32_t vals[2] = {std::int32_t(rec * 10 + rank), std::int32_t(rank)};
            std::uint64_t start[2] = {rec * 2 + std::uint64_t(rank), 0};
            std::uint64_t count[2] = {1, 2};
            REQ_OK(ds.put_vara_all(vid, start, count, MemoryType::I32, vals));
        }
        CHECK(ds.inq_numrecs() == 4);
        REQ_OK(ds.close());
        return 0;
    });
    group_spawn(1, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::open(g, rank, tmp.path, {}, &ds));
        CHECK(ds.inq_numrecs() == 4);
        std::int32_t v = -1;
        std::uint64_t idx[2] = {3, 0};
        REQ_OK(ds.get_var1(0, idx, MemoryType::I32, &v));
        CHECK(v == 11);
        REQ_OK(ds.close());
        return 0;
    });
}

TEST_CASE("divergent definitions fail at enddef on every rank, file intact") {
    TempFile tmp("diverge");
    group_spawn(2, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::create(g, rank, tmp.path, {}, &ds));
        REQ_OK(ds.enddef());
        REQ_OK(ds.close());
        return 0;
    });
    const std::uint64_t digest_before = file_digest(tmp.path);
    auto codes = group_spawn(2, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::open(g, rank, tmp.path, {}, &ds));
        REQ_OK(ds.redef());
        REQ_OK(ds.def_dim("x", 4));
        REQ_OK(ds.def_var(rank == 0 ? "a" : "b", ExternalType::INT, {0}));
        Err code = ds.enddef().code;
        return code;
    });
    CHECK(codes == std::vector<Err>{Err::CollectiveMismatch, Err::CollectiveMismatch});
    CHECK(file_digest(tmp.path) == digest_before);
}

TEST_CASE("redef relocation matches a rewrite-from-scratch file") {
    TempFile incremental("reloc_inc"), fresh("reloc_fresh");
    std::vector<std::int32_t> first(8), second(6);
    std::iota(first.begin(), first.end(), 100);
    std::iota(second.begin(), second.end(), 500);

    group_spawn(2, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::create(g, rank, incremental.path, {}, &ds));
        REQ_OK(ds.def_dim("x", 8));
        REQ_OK(ds.def_var("a", ExternalType::INT, {0}));
        REQ_OK(ds.enddef());
        std::uint64_t start[1] = {std::uint64_t(rank) * 4};
        std::uint64_t count[1] = {4};
        REQ_OK(ds.put_vara_all(0, start, count, MemoryType::I32,
                               first.data() + std::uint64_t(rank) * 4));
        // grow the header: a new dim, var, and attribute force relocation
        REQ_OK(ds.redef());
        REQ_OK(ds.def_dim("y_with_a_long_name_to_grow_the_header", 6));
        REQ_OK(ds.def_var("b", ExternalType::INT, {1}));
        Attribute note;
        note.name = "note";
        note.type = ExternalType::CHAR;
        note.chars = "relocated after data was written";
        REQ_OK(ds.put_att(kGlobalAtt, note));
        REQ_OK(ds.enddef());
        std::uint64_t s2[1] = {std::uint64_t(rank) * 3};
        std::uint64_t c2[1] = {3};
        REQ_OK(ds.put_vara_all(1, s2, c2, MemoryType::I32,
                               second.data() + std::uint64_t(rank) * 3));
        // old data must be readable at its new location
        std::vector<std::int32_t> back(8, -1);
        REQ_OK(ds.get_var(0, MemoryType::I32, back.data()));
        CHECK(back == first);
        REQ_OK(ds.close());
        return 0;
    });

    group_spawn(2, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::create(g, rank, fresh.path, {}, &ds));
        REQ_OK(ds.def_dim("x", 8));
        REQ_OK(ds.def_var("a", ExternalType::INT, {0}));
        REQ_OK(ds.def_dim("y_with_a_long_name_to_grow_the_header", 6));
        REQ_OK(ds.def_var("b", ExternalType::INT, {1}));
        Attribute note;
        note.name = "note";
        note.type = ExternalType::CHAR;
        note.chars = "relocated after data was written";
        REQ_OK(ds.put_att(kGlobalAtt, note));
        REQ_OK(ds.enddef());
        std::uint64_t start[1] = {std::uint64_t(rank) * 4};
        std::uint64_t count[1] = {4};
        REQ_OK(ds.put_vara_all(0, start, count, MemoryType::I32,
                               first.data() + std::uint64_t(rank) * 4));
        std::uint64_t s2[1] = {std::uint64_t(rank) * 3};
        std::uint64_t c2[1] = {3};
        REQ_OK(ds.put_vara_all(1, s2, c2, MemoryType::I32,
                               second.data() + std::uint64_t(rank) * 3));
        REQ_OK(ds.close());
        return 0;
    });

    CHECK(file_digest(incremental.path) == file_digest(fresh.path));
}

TEST_CASE("mode machine rejections") {
    TempFile tmp("mode");
    group_spawn(1, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::create(g, rank, tmp.path, {}, &ds));
        REQ_OK(ds.def_dim("x", 2));
        REQ_OK(ds.def_var("v", ExternalType::INT, {0}));
        std::int32_t vals[2] = {1, 2};
        std::uint64_t start[1] = {0}, count[1] = {2};
        CHECK(ds.put_vara(0, start, count, MemoryType::I32, vals).code == Err::NotInDataMode);
        REQ_OK(ds.enddef());
        CHECK(ds.def_var("w", ExternalType::INT, {0}).code == Err::NotInDefineMode);
        REQ_OK(ds.put_vara(0, start, count, MemoryType::I32, vals));
        REQ_OK(ds.close());
        return 0;
    });
}

TEST_CASE("inquiry performs no I/O and no synchronization") {
    TempFile tmp("inq");
    group_spawn(2, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::create(g, rank, tmp.path, {}, &ds));
        REQ_OK(ds.def_dim("x", 3));
        REQ_OK(ds.def_var("v", ExternalType::FLOAT, {0}));
        REQ_OK(ds.enddef());

        ds.file()->reset_stats();
        const std::uint64_t collectives = g.collective_count();
        CHECK(ds.inq_ndims() == 1);
        CHECK(ds.inq_nvars() == 1);
        std::string name;
        std::uint64_t len = 0;
        REQ_OK(ds.inq_dim(0, &name, &len));
        CHECK(name == "x");
        CHECK(len == 3);
        int id = -1;
        REQ_OK(ds.inq_varid("v", &id));
        CHECK(ds.file()->stats().reads == 0);
        CHECK(ds.file()->stats().writes == 0);
        CHECK(g.collective_count() == collectives);
        REQ_OK(ds.close());
        return 0;
    });
}

TEST_CASE("flexible layout equals the high-level call") {
    TempFile a("flex_a"), b("flex_b");
    std::vector<double> buf(16);
    std::iota(buf.begin(), buf.end(), 1.0);
    auto build = [&](const std::string& path, bool flex) {
        group_spawn(2, [&](Group& g, int rank) {
            Dataset ds;
            REQ_OK(Dataset::create(g, rank, path, {}, &ds));
            REQ_OK(ds.def_dim("y", 4));
            REQ_OK(ds.def_dim("x", 4));
            REQ_OK(ds.def_var("v", ExternalType::DOUBLE, {0, 1}));
            REQ_OK(ds.enddef());
            std::uint64_t start[2] = {std::uint64_t(rank) * 2, 0};
            std::uint64_t count[2] = {2, 4};
            const double* src = buf.data() + std::uint64_t(rank) * 8;
            if (flex) {
                MemoryLayout layout = MemoryLayout::contiguous(64);
                REQ_OK(ds.put_vara_all_flex(0, start, count, {}, layout, MemoryType::F64, src));
            } else {
                REQ_OK(ds.put_vara_all(0, start, count, MemoryType::F64, src));
            }
            REQ_OK(ds.close());
            return 0;
        });
    };
    build(a.path, false);
    build(b.path, true);
    CHECK(file_digest(a.path) == file_digest(b.path));
}

TEST_CASE("flexible layout size mismatch is LayoutMismatch") {
    TempFile tmp("flex_bad");
    group_spawn(1, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::create(g, rank, tmp.path, {}, &ds));
        REQ_OK(ds.def_dim("x", 4));
        REQ_OK(ds.def_var("v", ExternalType::DOUBLE, {0}));
        REQ_OK(ds.enddef());
        double vals[4] = {};
        std::uint64_t start[1] = {0}, count[1] = {4};
        MemoryLayout wrong = MemoryLayout::contiguous(24);  // needs 32
        CHECK(ds.put_vara_all_flex(0, start, count, {}, wrong, MemoryType::F64, vals).code ==
              Err::LayoutMismatch);
        REQ_OK(ds.close());
        return 0;
    });
}

TEST_CASE("varm writes through a transposed memory buffer") {
    TempFile tmp("varm");
    group_spawn(1, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::create(g, rank, tmp.path, {}, &ds));
        REQ_OK(ds.def_dim("r", 2));
        REQ_OK(ds.def_dim("c", 3));
        REQ_OK(ds.def_var("m", ExternalType::DOUBLE, {0, 1}));
        REQ_OK(ds.enddef());
        // memory holds the transpose: m_mem[c][r]
        double mem[6] = {11, 21, 12, 22, 13, 23};  // columns of the 2x3 target
        std::uint64_t start[2] = {0, 0}, count[2] = {2, 3};
        std::uint64_t imap[2] = {1, 2};
        REQ_OK(ds.put_varm(0, start, count, {}, imap, MemoryType::F64, mem));
        double back[6] = {};
        REQ_OK(ds.get_var(0, MemoryType::F64, back));
        double want[6] = {11, 12, 13, 21, 22, 23};
        for (int i = 0; i < 6; ++i) CHECK(back[i] == want[i]);
        REQ_OK(ds.close());
        return 0;
    });
}

TEST_CASE("sync folds independent record extensions") {
    TempFile tmp("syncrec");
    group_spawn(2, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::create(g, rank, tmp.path, {}, &ds));
        REQ_OK(ds.def_dim("t", kUnlimited));
        REQ_OK(ds.def_dim("x", 2));
        REQ_OK(ds.def_var("v", ExternalType::INT, {0, 1}));
        REQ_OK(ds.enddef());
        // independent writes: rank 0 touches record 0, rank 1 record 2
        std::int32_t vals[2] = {rank, rank};
        std::uint64_t start[2] = {std::uint64_t(rank) * 2, 0};
        std::uint64_t count[2] = {1, 2};
        REQ_OK(ds.put_vara(0, start, count, MemoryType::I32, vals));
        REQ_OK(ds.sync());
        CHECK(ds.inq_numrecs() == 3);
        REQ_OK(ds.close());
        return 0;
    });
    group_spawn(1, [&](Group& g, int rank) {
        Dataset ds;
        REQ_OK(Dataset::open(g, rank, tmp.path, {}, &ds));
        CHECK(ds.inq_numrecs() == 3);
        REQ_OK(ds.close());
        return 0;
    });
}
