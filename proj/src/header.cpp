#include "pncdf/header.hpp"

#include <bit>
#include <cmath>
#include <cstring>

namespace pncdf {

namespace {

std::uint64_t name_size(const std::string& s) { return 4 + round_up4(s.size()); }

std::uint64_t att_size(const Attribute& a) {
    return name_size(a.name) + 4 + 4 + round_up4(a.nelems() * element_size(a.type));
}

std::uint64_t att_list_size(const std::vector<Attribute>& atts) {
    std::uint64_t n = 8;  // tag + count (or two zero words)
    for (const Attribute& a : atts) n += att_size(a);
    return n;
}

void put_name(Bytes& out, const std::string& s) {
    put_be32(out, std::uint32_t(s.size()));
    for (char c : s) out.push_back(std::byte(c));
    for (std::uint64_t i = s.size(); i < round_up4(s.size()); ++i)
        out.push_back(std::byte{0});
}

void put_att_values(Bytes& out, const Attribute& a) {
    const std::uint64_t payload = a.nelems() * element_size(a.type);
    switch (a.type) {
        case ExternalType::CHAR:
            for (char c : a.chars) out.push_back(std::byte(c));
            break;
        case ExternalType::BYTE:
            for (double v : a.numbers) out.push_back(std::byte(std::int8_t(v)));
            break;
        case ExternalType::SHORT:
            for (double v : a.numbers) {
                const auto x = std::uint16_t(std::int16_t(v));
                out.push_back(std::byte(x >> 8));
                out.push_back(std::byte(x));
            }
            break;
        case ExternalType::INT:
            for (double v : a.numbers) put_be32(out, std::uint32_t(std::int32_t(v)));
            break;
        case ExternalType::FLOAT:
            for (double v : a.numbers)
                put_be32(out, std::bit_cast<std::uint32_t>(float(v)));
            break;
        case ExternalType::DOUBLE:
            for (double v : a.numbers) put_be64(out, std::bit_cast<std::uint64_t>(v));
            break;
    }
    for (std::uint64_t i = payload; i < round_up4(payload); ++i)
        out.push_back(std::byte{0});
}

void put_att_list(Bytes& out, const std::vector<Attribute>& atts) {
    if (atts.empty()) {
        put_be32(out, 0);
        put_be32(out, 0);
        return;
    }
    put_be32(out, kTagAttribute);
    put_be32(out, std::uint32_t(atts.size()));
    for (const Attribute& a : atts) {
        put_name(out, a.name);
        put_be32(out, std::uint32_t(a.type));
        put_be32(out, std::uint32_t(a.nelems()));
        put_att_values(out, a);
    }
}

// --- decode cursor ---

struct Reader {
    std::span<const std::byte> in;
    std::uint64_t pos = 0;

    void need(std::uint64_t n) const {
        if (pos + n > in.size())
            throw Error(Err::TruncatedHeader, "header truncated at offset " + std::to_string(pos), pos);
    }
    std::uint32_t u32() {
        need(4);
        const auto v = get_be32(in.subspan(pos));
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        const auto v = get_be64(in.subspan(pos));
        pos += 8;
        return v;
    }
    std::string name() {
        const std::uint64_t at = pos;
        const std::uint32_t len = u32();
        need(round_up4(len));
        std::string s(reinterpret_cast<const char*>(in.data() + pos), len);
        if (s.empty() || s.find('\0') != std::string::npos)
            throw Error(Err::MalformedName, "bad name at offset " + std::to_string(at), at);
        for (std::uint64_t i = len; i < round_up4(len); ++i)
            if (in[pos + i] != std::byte{0})
                throw Error(Err::MalformedName, "nonzero name padding at offset " + std::to_string(pos + i), pos + i);
        pos += round_up4(len);
        return s;
    }
};

std::vector<Attribute> read_att_list(Reader& r) {
    const std::uint64_t at = r.pos;
    const std::uint32_t tag = r.u32();
    const std::uint32_t count = r.u32();
    std::vector<Attribute> atts;
    if (tag == 0 && count == 0) return atts;
    if (tag != kTagAttribute)
        throw Error(Err::InvalidSchema, "expected attribute tag at offset " + std::to_string(at), at);
    atts.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        Attribute a;
        a.name = r.name();
        const std::uint64_t tat = r.pos;
        const auto tcode = std::int32_t(r.u32());
        if (!valid_external_type(tcode))
            throw Error(Err::InvalidSchema, "bad attribute type at offset " + std::to_string(tat), tat);
        a.type = ExternalType(tcode);
        const std::uint32_t n = r.u32();
        const std::uint64_t payload = std::uint64_t(n) * element_size(a.type);
        r.need(round_up4(payload));
        const std::byte* p = r.in.data() + r.pos;
        switch (a.type) {
            case ExternalType::CHAR:
                a.chars.assign(reinterpret_cast<const char*>(p), n);
                break;
            case ExternalType::BYTE:
                for (std::uint32_t k = 0; k < n; ++k)
                    a.numbers.push_back(double(std::int8_t(p[k])));
                break;
            case ExternalType::SHORT:
                for (std::uint32_t k = 0; k < n; ++k)
                    a.numbers.push_back(double(std::int16_t(
                        std::uint16_t(p[2 * k]) << 8 | std::uint16_t(p[2 * k + 1]))));
                break;
            case ExternalType::INT:
                for (std::uint32_t k = 0; k < n; ++k)
                    a.numbers.push_back(double(std::int32_t(get_be32({p + 4 * k, 4}))));
                break;
            case ExternalType::FLOAT:
                for (std::uint32_t k = 0; k < n; ++k)
                    a.numbers.push_back(double(std::bit_cast<float>(get_be32({p + 4 * k, 4}))));
                break;
            case ExternalType::DOUBLE:
                for (std::uint32_t k = 0; k < n; ++k)
                    a.numbers.push_back(std::bit_cast<double>(get_be64({p + 8 * k, 8})));
                break;
        }
        r.pos += round_up4(payload);
        atts.push_back(std::move(a));
    }
    return atts;
}

}  // namespace

std::uint64_t encoded_header_size(const Schema& s) {
    std::uint64_t n = 4 + 4;  // magic + numrecs
    n += 8;                   // dim list tag/count
    for (const Dimension& d : s.dimensions) n += name_size(d.name) + 4;
    n += att_list_size(s.global_attributes);
    n += 8;  // var list tag/count
    for (const Variable& v : s.variables) {
        n += name_size(v.name) + 4 + 4 * v.dim_ids.size();
        n += att_list_size(v.attributes);
        n += 4 + 4 + 4;  // type, vsize, begin (CDF-1)
    }
    return n;
}

Bytes encode_header(const Schema& s) {
    try {
        s.validate();
    } catch (const Error& e) {
        throw Error(Err::InvalidSchema, e.what());
    }
    const std::uint64_t grammar = encoded_header_size(s);
    if (s.data_begin != 0 && grammar > s.data_begin)
        throw Error(Err::HeaderOverflow,
                    "encoded header (" + std::to_string(grammar) + " bytes) exceeds data_begin " +
                        std::to_string(s.data_begin));

    Bytes out;
    out.reserve(std::max(grammar, s.data_begin));
    out.push_back(std::byte{'C'});
    out.push_back(std::byte{'D'});
    out.push_back(std::byte{'F'});
    out.push_back(std::byte{1});
    put_be32(out, std::uint32_t(s.numrecs));

    if (s.dimensions.empty()) {
        put_be32(out, 0);
        put_be32(out, 0);
    } else {
        put_be32(out, kTagDimension);
        put_be32(out, std::uint32_t(s.dimensions.size()));
        for (const Dimension& d : s.dimensions) {
            put_name(out, d.name);
            put_be32(out, std::uint32_t(d.is_unlimited ? 0 : d.length));
        }
    }

    put_att_list(out, s.global_attributes);

    if (s.variables.empty()) {
        put_be32(out, 0);
        put_be32(out, 0);
    } else {
        put_be32(out, kTagVariable);
        put_be32(out, std::uint32_t(s.variables.size()));
        for (const Variable& v : s.variables) {
            put_name(out, v.name);
            put_be32(out, std::uint32_t(v.dim_ids.size()));
            for (int d : v.dim_ids) put_be32(out, std::uint32_t(d));
            put_att_list(out, v.attributes);
            put_be32(out, std::uint32_t(v.type));
            put_be32(out, std::uint32_t(v.vsize));
            put_be32(out, std::uint32_t(v.begin));
        }
    }

    while (out.size() < s.data_begin) out.push_back(std::byte{0});
    return out;
}

Schema decode_header(std::span<const std::byte> bytes) {
    if (bytes.size() < 4 || bytes[0] != std::byte{'C'} || bytes[1] != std::byte{'D'} ||
        bytes[2] != std::byte{'F'})
        throw Error(Err::BadMagic, "not a classic container (bad magic)", 0);
    if (bytes[3] != std::byte{1})
        throw Error(Err::UnsupportedVersion,
                    "unsupported version byte " + std::to_string(int(bytes[3])), 3);

    Reader r{bytes, 4};
    Schema s;
    s.format_version = 1;
    s.numrecs = r.u32();

    {
        const std::uint64_t at = r.pos;
        const std::uint32_t tag = r.u32();
        const std::uint32_t count = r.u32();
        if (!(tag == 0 && count == 0)) {
            if (tag != kTagDimension)
                throw Error(Err::InvalidSchema, "expected dimension tag at offset " + std::to_string(at), at);
            for (std::uint32_t i = 0; i < count; ++i) {
                Dimension d;
                d.name = r.name();
                d.length = r.u32();
                d.is_unlimited = (d.length == 0);
                s.dimensions.push_back(std::move(d));
            }
        }
    }

    s.global_attributes = read_att_list(r);

    {
        const std::uint64_t at = r.pos;
        const std::uint32_t tag = r.u32();
        const std::uint32_t count = r.u32();
        if (!(tag == 0 && count == 0)) {
            if (tag != kTagVariable)
                throw Error(Err::InvalidSchema, "expected variable tag at offset " + std::to_string(at), at);
            for (std::uint32_t i = 0; i < count; ++i) {
                Variable v;
                v.name = r.name();
                const std::uint32_t rank = r.u32();
                for (std::uint32_t k = 0; k < rank; ++k)
                    v.dim_ids.push_back(int(r.u32()));
                v.attributes = read_att_list(r);
                const std::uint64_t tat = r.pos;
                const auto tcode = std::int32_t(r.u32());
                if (!valid_external_type(tcode))
                    throw Error(Err::InvalidSchema, "bad variable type at offset " + std::to_string(tat), tat);
                v.type = ExternalType(tcode);
                v.vsize = r.u32();
                v.begin = r.u32();
                v.var_id = int(i);
                s.variables.push_back(std::move(v));
            }
        }
    }

    try {
        s.validate();
    } catch (const Error& e) {
        throw Error(Err::InvalidSchema, e.what(), r.pos);
    }

    // Layout consistency and data_begin recovery.
    const std::uint64_t grammar = r.pos;
    std::uint64_t prev_end = 0;
    bool have_fixed = false;
    std::uint64_t first_record_begin = 0;
    bool have_record = false;
    s.recsize = 0;
    for (const Variable& v : s.variables) {
        if (s.is_record_var(v)) {
            if (!have_record) {
                first_record_begin = v.begin;
                have_record = true;
            }
            s.recsize += v.vsize;
            continue;
        }
        if (have_fixed && v.begin < prev_end)
            throw Error(Err::InconsistentOffsets,
                        "variable " + v.name + " begin " + std::to_string(v.begin) +
                            " overlaps previous variable ending at " + std::to_string(prev_end));
        if (v.begin % 4 != 0)
            throw Error(Err::InconsistentOffsets, "variable " + v.name + " begin not 4-aligned");
        prev_end = v.begin + v.vsize;
        have_fixed = true;
    }
    if (have_record && have_fixed && first_record_begin < prev_end)
        throw Error(Err::InconsistentOffsets, "record data overlaps fixed-size data");

    if (have_fixed || have_record) {
        s.data_begin = std::uint64_t(-1);
        for (const Variable& v : s.variables)
            if (!s.is_record_var(v)) s.data_begin = std::min(s.data_begin, v.begin);
        if (s.data_begin == std::uint64_t(-1)) s.data_begin = first_record_begin;
        if (s.data_begin < grammar)
            throw Error(Err::InconsistentOffsets, "data_begin precedes end of header");
    } else {
        s.data_begin = grammar;
    }
    return s;
}

Schema compute_layout(Schema s, std::uint64_t header_pad) {
    s.validate();

    int record_vars = 0;
    for (const Variable& v : s.variables)
        if (s.is_record_var(v)) ++record_vars;

    for (Variable& v : s.variables) {
        const std::uint64_t raw = raw_vsize(s, v);
        const bool sole_record = s.is_record_var(v) && record_vars == 1;
        v.vsize = sole_record ? raw : round_up4(raw);
    }

    s.data_begin = round_up4(encoded_header_size(s) + header_pad);

    std::uint64_t cursor = s.data_begin;
    for (Variable& v : s.variables) {
        if (s.is_record_var(v)) continue;
        v.begin = cursor;
        cursor += v.vsize;
        if (v.begin > kMaxOffset)
            throw Error(Err::Overflow, "variable " + v.name + " begin exceeds CDF-1 offset limit");
    }
    s.recsize = 0;
    for (Variable& v : s.variables) {
        if (!s.is_record_var(v)) continue;
        v.begin = cursor + s.recsize;
        s.recsize += v.vsize;
        if (v.begin > kMaxOffset)
            throw Error(Err::Overflow, "variable " + v.name + " begin exceeds CDF-1 offset limit");
    }
    if (s.data_begin > kMaxOffset)
        throw Error(Err::Overflow, "data_begin exceeds CDF-1 offset limit");
    return s;
}

}  // namespace pncdf
