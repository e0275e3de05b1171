#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

namespace pncdf {

using Bytes = std::vector<std::byte>;

// Big-endian primitives of the external format.

inline void put_be32(Bytes& out, std::uint32_t v) {
    out.push_back(std::byte(v >> 24));
    out.push_back(std::byte(v >> 16));
    out.push_back(std::byte(v >> 8));
    out.push_back(std::byte(v));
}

inline void put_be64(Bytes& out, std::uint64_t v) {
    put_be32(out, std::uint32_t(v >> 32));
    put_be32(out, std::uint32_t(v));
}

inline std::uint32_t get_be32(std::span<const std::byte> b) {
    return std::uint32_t(b[0]) << 24 | std::uint32_t(b[1]) << 16 |
           std::uint32_t(b[2]) << 8 | std::uint32_t(b[3]);
}

inline std::uint64_t get_be64(std::span<const std::byte> b) {
    return std::uint64_t(get_be32(b)) << 32 | get_be32(b.subspan(4));
}

inline std::uint64_t round_up4(std::uint64_t n) { return (n + 3) & ~std::uint64_t{3}; }

// Serialization helpers for in-process collective exchanges (host order,
// never hits the file).

inline void pack_u64(Bytes& out, std::uint64_t v) {
    const auto* p = reinterpret_cast<const std::byte*>(&v);
    out.insert(out.end(), p, p + sizeof v);
}

inline std::uint64_t unpack_u64(std::span<const std::byte> b, std::size_t& pos) {
    std::uint64_t v;
    std::memcpy(&v, b.data() + pos, sizeof v);
    pos += sizeof v;
    return v;
}

inline void pack_bytes(Bytes& out, std::span<const std::byte> b) {
    pack_u64(out, b.size());
    out.insert(out.end(), b.begin(), b.end());
}

/// FNV-1a, used for schema digests and benchmark file digests.
inline std::uint64_t fnv1a(std::span<const std::byte> data, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (std::byte b : data) {
        h ^= std::uint64_t(b);
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace pncdf
