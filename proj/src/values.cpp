#include "pncdf/values.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

namespace pncdf {

std::size_t element_size(MemoryType t) {
    switch (t) {
        case MemoryType::I8:
        case MemoryType::CHAR: return 1;
        case MemoryType::I16: return 2;
        case MemoryType::I32:
        case MemoryType::F32: return 4;
        case MemoryType::I64:
        case MemoryType::F64: return 8;
    }
    throw Error(Err::TypeMismatch, "unknown memory type");
}

MemoryType identity_memory_type(ExternalType t) {
    switch (t) {
        case ExternalType::BYTE: return MemoryType::I8;
        case ExternalType::CHAR: return MemoryType::CHAR;
        case ExternalType::SHORT: return MemoryType::I16;
        case ExternalType::INT: return MemoryType::I32;
        case ExternalType::FLOAT: return MemoryType::F32;
        case ExternalType::DOUBLE: return MemoryType::F64;
    }
    throw Error(Err::TypeMismatch, "unknown external type");
}

namespace {

// Numeric carrier: integers stay exact, floats ride as double.
struct Num {
    bool is_int;
    std::int64_t i;
    double d;
};

bool is_char(MemoryType t) { return t == MemoryType::CHAR; }

Num load_mem(MemoryType t, const void* base, std::size_t idx) {
    const auto* p = static_cast<const std::byte*>(base) + idx * element_size(t);
    switch (t) {
        case MemoryType::I8: {
            std::int8_t v;
            std::memcpy(&v, p, 1);
            return {true, v, 0};
        }
        case MemoryType::I16: {
            std::int16_t v;
            std::memcpy(&v, p, 2);
            return {true, v, 0};
        }
        case MemoryType::I32: {
            std::int32_t v;
            std::memcpy(&v, p, 4);
            return {true, v, 0};
        }
        case MemoryType::I64: {
            std::int64_t v;
            std::memcpy(&v, p, 8);
            return {true, v, 0};
        }
        case MemoryType::F32: {
            float v;
            std::memcpy(&v, p, 4);
            return {false, 0, double(v)};
        }
        case MemoryType::F64: {
            double v;
            std::memcpy(&v, p, 8);
            return {false, 0, v};
        }
        case MemoryType::CHAR: break;
    }
    throw Error(Err::TypeMismatch, "CHAR is not numeric");
}

std::int64_t to_int(const Num& n, std::int64_t lo, std::int64_t hi, const char* target) {
    std::int64_t v;
    if (n.is_int) {
        v = n.i;
    } else {
        // Truncation toward zero, checked.
        if (std::isnan(n.d))
            throw Error(Err::RangeError, std::string("NaN not representable as ") + target);
        const double t = std::trunc(n.d);
        // double(hi) + 1.0 is exact for every target bound here (2^k).
        if (!(t >= double(lo) && t < double(hi) + 1.0))
            throw Error(Err::RangeError, "value " + std::to_string(n.d) + " out of range for " + target);
        v = std::int64_t(t);
    }
    if (v < lo || v > hi)
        throw Error(Err::RangeError, "value " + std::to_string(v) + " out of range for " + target);
    return v;
}

double to_double(const Num& n) { return n.is_int ? double(n.i) : n.d; }

float to_float(const Num& n) {
    const double d = to_double(n);
    const auto f = float(d);
    if (std::isfinite(d) && !std::isfinite(f))
        throw Error(Err::RangeError, "value " + std::to_string(d) + " overflows float");
    return f;
}

void store_mem(MemoryType t, void* base, std::size_t idx, const Num& n) {
    auto* p = static_cast<std::byte*>(base) + idx * element_size(t);
    switch (t) {
        case MemoryType::I8: {
            const auto v = std::int8_t(to_int(n, -128, 127, "byte"));
            std::memcpy(p, &v, 1);
            return;
        }
        case MemoryType::I16: {
            const auto v = std::int16_t(to_int(n, -32768, 32767, "short"));
            std::memcpy(p, &v, 2);
            return;
        }
        case MemoryType::I32: {
            const auto v = std::int32_t(to_int(n, std::numeric_limits<std::int32_t>::min(),
                                               std::numeric_limits<std::int32_t>::max(), "int"));
            std::memcpy(p, &v, 4);
            return;
        }
        case MemoryType::I64: {
            const auto v = to_int(n, std::numeric_limits<std::int64_t>::min(),
                                  std::numeric_limits<std::int64_t>::max(), "int64");
            std::memcpy(p, &v, 8);
            return;
        }
        case MemoryType::F32: {
            const float v = to_float(n);
            std::memcpy(p, &v, 4);
            return;
        }
        case MemoryType::F64: {
            const double v = to_double(n);
            std::memcpy(p, &v, 8);
            return;
        }
        case MemoryType::CHAR: break;
    }
    throw Error(Err::TypeMismatch, "CHAR is not numeric");
}

}  // namespace

Bytes encode_values(ExternalType etype, MemoryType mtype, const void* values, std::size_t count) {
    Bytes out;
    out.reserve(count * element_size(etype));
    if (etype == ExternalType::CHAR || is_char(mtype)) {
        if (!(etype == ExternalType::CHAR && is_char(mtype)))
            throw Error(Err::TypeMismatch, "CHAR converts only to CHAR");
        const auto* p = static_cast<const std::byte*>(values);
        out.assign(p, p + count);
        return out;
    }
    for (std::size_t k = 0; k < count; ++k) {
        const Num n = load_mem(mtype, values, k);
        switch (etype) {
            case ExternalType::BYTE:
                out.push_back(std::byte(std::uint8_t(to_int(n, -128, 127, "byte"))));
                break;
            case ExternalType::SHORT: {
                const auto v = std::uint16_t(to_int(n, -32768, 32767, "short"));
                out.push_back(std::byte(v >> 8));
                out.push_back(std::byte(v));
                break;
            }
            case ExternalType::INT:
                put_be32(out, std::uint32_t(std::int32_t(
                                  to_int(n, std::numeric_limits<std::int32_t>::min(),
                                         std::numeric_limits<std::int32_t>::max(), "int"))));
                break;
            case ExternalType::FLOAT:
                put_be32(out, std::bit_cast<std::uint32_t>(to_float(n)));
                break;
            case ExternalType::DOUBLE:
                put_be64(out, std::bit_cast<std::uint64_t>(to_double(n)));
                break;
            case ExternalType::CHAR: break;  // unreachable
        }
    }
    return out;
}

void decode_values(ExternalType etype, MemoryType mtype, std::span<const std::byte> bytes, void* out) {
    const std::size_t esize = element_size(etype);
    if (bytes.size() % esize != 0)
        throw Error(Err::TypeMismatch, "byte length not a multiple of element size");
    const std::size_t count = bytes.size() / esize;

    if (etype == ExternalType::CHAR || is_char(mtype)) {
        if (!(etype == ExternalType::CHAR && is_char(mtype)))
            throw Error(Err::TypeMismatch, "CHAR converts only to CHAR");
        std::memcpy(out, bytes.data(), count);
        return;
    }
    for (std::size_t k = 0; k < count; ++k) {
        const std::byte* p = bytes.data() + k * esize;
        Num n{};
        switch (etype) {
            case ExternalType::BYTE:
                n = {true, std::int8_t(*p), 0};
                break;
            case ExternalType::SHORT:
                n = {true, std::int16_t(std::uint16_t(p[0]) << 8 | std::uint16_t(p[1])), 0};
                break;
            case ExternalType::INT:
                n = {true, std::int32_t(get_be32({p, 4})), 0};
                break;
            case ExternalType::FLOAT:
                n = {false, 0, double(std::bit_cast<float>(get_be32({p, 4})))};
                break;
            case ExternalType::DOUBLE:
                n = {false, 0, std::bit_cast<double>(get_be64({p, 8}))};
                break;
            case ExternalType::CHAR: break;  // unreachable
        }
        store_mem(mtype, out, k, n);
    }
}

Bytes fill_bytes(ExternalType etype) {
    switch (etype) {
        case ExternalType::BYTE: {
            const std::int8_t v = -127;
            return encode_values(etype, MemoryType::I8, &v, 1);
        }
        case ExternalType::CHAR: {
            const char v = '\0';
            return encode_values(etype, MemoryType::CHAR, &v, 1);
        }
        case ExternalType::SHORT: {
            const std::int16_t v = -32767;
            return encode_values(etype, MemoryType::I16, &v, 1);
        }
        case ExternalType::INT: {
            const std::int32_t v = -2147483647;
            return encode_values(etype, MemoryType::I32, &v, 1);
        }
        case ExternalType::FLOAT: {
            const float v = 9.9692099683868690e+36f;
            return encode_values(etype, MemoryType::F32, &v, 1);
        }
        case ExternalType::DOUBLE: {
            const double v = 9.9692099683868690e+36;
            return encode_values(etype, MemoryType::F64, &v, 1);
        }
    }
    throw Error(Err::TypeMismatch, "unknown external type");
}

}  // namespace pncdf
