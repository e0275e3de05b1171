#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pncdf/types.hpp"

namespace pncdf {

/// Axis sets along which the 3-D array is partitioned across ranks, plus
/// the first-dimension block pattern of the FLASH-like workload.
enum class Pattern { Z, Y, X, ZY, ZX, YX, ZYX, BLOCK };

const char* pattern_name(Pattern p);
Pattern parse_pattern(const std::string& s);

/// Balanced factorization of n over `naxes` axes; factors non-increasing,
/// so the most significant axis gets the larger count.
std::vector<int> factor_axes(int n, int naxes);

struct Subarray {
    std::vector<std::uint64_t> start;
    std::vector<std::uint64_t> count;
};

/// Rank r's block of `shape` under a pattern with n participants. Axes
/// not in the pattern are kept whole; short axes leave trailing ranks
/// with empty counts.
Subarray partition_subarray(Pattern pattern, const std::vector<std::uint64_t>& shape, int n,
                            int rank);

struct BenchPhase {
    std::string name;
    double seconds = 0;
    std::uint64_t ops = 0;  // contiguous file operations in the phase
};

struct BenchReport {
    std::string pattern;
    int n = 0;
    std::vector<std::uint64_t> shape;
    std::uint64_t total_bytes = 0;
    std::vector<BenchPhase> phases;
    std::uint64_t file_digest = 0;
    bool verified = true;  // read mode: all elements matched the generator

    /// CSV rows: pattern,n,bytes,phase,seconds,ops
    std::string csv() const;
};

BenchReport bench_partition(const std::vector<std::uint64_t>& shape, ExternalType etype,
                            Pattern pattern, int n, bool write_mode, const std::string& out_path,
                            std::uint64_t aggregators = 0);

BenchReport bench_flash(std::uint64_t nxb, std::uint64_t nyb, std::uint64_t nzb,
                        std::uint64_t nblocks, std::uint64_t nvar, int n,
                        const std::string& out_path);

/// FNV digest of a file's bytes.
std::uint64_t file_digest(const std::string& path);

}  // namespace pncdf
