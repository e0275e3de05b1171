// Benchmark harness: partitioned 3-D array access and a FLASH-like
// block-partitioned multi-variable workload.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pncdf/bench.hpp"
#include "pncdf/error.hpp"

namespace {

std::vector<std::uint64_t> parse_shape(const std::string& s) {
    std::vector<std::uint64_t> shape;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find('x', pos);
        if (next == std::string::npos) next = s.size();
        shape.push_back(std::stoull(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return shape;
}

pncdf::ExternalType parse_type(const std::string& s) {
    using pncdf::ExternalType;
    for (ExternalType t : {ExternalType::BYTE, ExternalType::CHAR, ExternalType::SHORT,
                           ExternalType::INT, ExternalType::FLOAT, ExternalType::DOUBLE})
        if (s == pncdf::type_name(t)) return t;
    throw pncdf::Error(pncdf::Err::TypeMismatch, "unknown type: " + s);
}

void print_report(const pncdf::BenchReport& report) {
    std::cout << report.csv();
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016llx", (unsigned long long)report.file_digest);
    std::cout << "# digest=" << digest << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parallel access-pattern benchmarks"};
    app.require_subcommand(1);

    auto* partition = app.add_subcommand("partition", "partitioned 3-D array read/write");
    std::string shape_arg = "8x8x8", type_arg = "double", pattern_arg = "Z", mode_arg = "write";
    std::string out_path;
    int n = 1;
    std::uint64_t aggregators = 0;
    partition->add_option("--shape", shape_arg, "array shape ZxYxX")->required();
    partition->add_option("--type", type_arg, "element type");
    partition->add_option("--pattern", pattern_arg, "Z|Y|X|ZY|ZX|YX|ZYX|BLOCK")->required();
    partition->add_option("--n", n, "participant count")->required();
    partition->add_option("--mode", mode_arg, "write|read")->required();
    partition->add_option("--out", out_path, "dataset path")->required();
    partition->add_option("--aggregators", aggregators, "aggregator count hint");

    auto* flash = app.add_subcommand("flash", "FLASH-like block-partitioned write");
    std::uint64_t nxb = 8, nyb = 8, nzb = 8, nblocks = 80, nvar = 24;
    flash->add_option("--nxb", nxb, "block interior x size")->required();
    flash->add_option("--nyb", nyb, "block interior y size")->required();
    flash->add_option("--nzb", nzb, "block interior z size")->required();
    flash->add_option("--nblocks", nblocks, "blocks per participant")->required();
    flash->add_option("--nvar", nvar, "variable count")->required();
    flash->add_option("--n", n, "participant count")->required();
    flash->add_option("--out", out_path, "dataset path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (partition->parsed()) {
            if (mode_arg != "write" && mode_arg != "read")
                throw pncdf::Error(pncdf::Err::BadId, "mode must be write or read");
            const auto report =
                pncdf::bench_partition(parse_shape(shape_arg), parse_type(type_arg),
                                       pncdf::parse_pattern(pattern_arg), n, mode_arg == "write",
                                       out_path, aggregators);
            print_report(report);
            if (!report.verified) {
                std::cerr << "verification failed: read data does not match the generator\n";
                return 1;
            }
        } else {
            print_report(pncdf::bench_flash(nxb, nyb, nzb, nblocks, nvar, n, out_path));
        }
    } catch (const pncdf::Error& e) {
        std::cerr << "error: " << pncdf::err_name(e.code()) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
