#pragma once

#include <cstdint>
#include <span>

#include "pncdf/types.hpp"
#include "pncdf/wire.hpp"

namespace pncdf {

// Tag constants of the classic header grammar.
inline constexpr std::uint32_t kTagDimension = 10;  // NC_DIMENSION
inline constexpr std::uint32_t kTagVariable = 11;   // NC_VARIABLE
inline constexpr std::uint32_t kTagAttribute = 12;  // NC_ATTRIBUTE

/// Grammar length of the header (magic through variable list, before the
/// trailing fill up to data_begin). Always a multiple of 4.
std::uint64_t encoded_header_size(const Schema& s);

/// Serialize to the bit-exact classic grammar, zero filled to data_begin.
Bytes encode_header(const Schema& s);

/// Parse a classic header. Throws BadMagic / TruncatedHeader /
/// UnsupportedVersion / MalformedName / InconsistentOffsets, with the
/// offending byte offset.
Schema decode_header(std::span<const std::byte> bytes);

/// Fill in vsize/begin/recsize/data_begin. header_pad reserves growth room
/// after the encoded grammar; data_begin = round_up4(grammar + pad).
Schema compute_layout(Schema s, std::uint64_t header_pad = 0);

/// Byte offset of the numrecs field within the header.
inline constexpr std::uint64_t kNumrecsOffset = 4;

// CDF-1 keeps offsets within 31 bits.
inline constexpr std::uint64_t kMaxOffset = 0x7fffffffull;

}  // namespace pncdf
