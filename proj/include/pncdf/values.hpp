#pragma once

#include <cstdint>
#include <span>

#include "pncdf/types.hpp"
#include "pncdf/wire.hpp"

namespace pncdf {

/// In-memory element kinds: the external set plus wider integers.
enum class MemoryType {
    I8,
    CHAR,
    I16,
    I32,
    I64,
    F32,
    F64,
};

std::size_t element_size(MemoryType t);
MemoryType identity_memory_type(ExternalType t);

/// Maps C++ element types onto MemoryType for typed call sites.
template <class T>
struct memory_type_of;
template <> struct memory_type_of<std::int8_t> { static constexpr MemoryType value = MemoryType::I8; };
template <> struct memory_type_of<char> { static constexpr MemoryType value = MemoryType::CHAR; };
template <> struct memory_type_of<std::int16_t> { static constexpr MemoryType value = MemoryType::I16; };
template <> struct memory_type_of<std::int32_t> { static constexpr MemoryType value = MemoryType::I32; };
template <> struct memory_type_of<std::int64_t> { static constexpr MemoryType value = MemoryType::I64; };
template <> struct memory_type_of<float> { static constexpr MemoryType value = MemoryType::F32; };
template <> struct memory_type_of<double> { static constexpr MemoryType value = MemoryType::F64; };

/// Packs `count` elements stored natively as mtype into big-endian etype
/// bytes. Throws RangeError on narrowing overflow, TypeMismatch on
/// CHAR/number cross-conversion.
Bytes encode_values(ExternalType etype, MemoryType mtype, const void* values, std::size_t count);

/// Inverse direction: big-endian etype bytes into a native mtype buffer.
/// bytes.size() must be a multiple of element_size(etype).
void decode_values(ExternalType etype, MemoryType mtype, std::span<const std::byte> bytes, void* out);

/// Default fill sentinel, already in external big-endian form.
Bytes fill_bytes(ExternalType etype);

}  // namespace pncdf
