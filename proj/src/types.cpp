#include "pncdf/types.hpp"

#include <unordered_set>

#include "pncdf/wire.hpp"

namespace pncdf {

std::size_t element_size(ExternalType t) {
    switch (t) {
        case ExternalType::BYTE:
        case ExternalType::CHAR: return 1;
        case ExternalType::SHORT: return 2;
        case ExternalType::INT:
        case ExternalType::FLOAT: return 4;
        case ExternalType::DOUBLE: return 8;
    }
    throw Error(Err::InvalidSchema, "unknown external type");
}

const char* type_name(ExternalType t) {
    switch (t) {
        case ExternalType::BYTE: return "byte";
        case ExternalType::CHAR: return "char";
        case ExternalType::SHORT: return "short";
        case ExternalType::INT: return "int";
        case ExternalType::FLOAT: return "float";
        case ExternalType::DOUBLE: return "double";
    }
    return "?";
}

bool valid_external_type(std::int32_t code) { return code >= 1 && code <= 6; }

const char* err_name(Err e) {
    switch (e) {
        case Err::Ok: return "Ok";
        case Err::BadMagic: return "BadMagic";
        case Err::TruncatedHeader: return "TruncatedHeader";
        case Err::UnsupportedVersion: return "UnsupportedVersion";
        case Err::MalformedName: return "MalformedName";
        case Err::InconsistentOffsets: return "InconsistentOffsets";
        case Err::InvalidSchema: return "InvalidSchema";
        case Err::HeaderOverflow: return "HeaderOverflow";
        case Err::Overflow: return "Overflow";
        case Err::RangeError: return "RangeError";
        case Err::TypeMismatch: return "TypeMismatch";
        case Err::OutOfBounds: return "OutOfBounds";
        case Err::RankMismatch: return "RankMismatch";
        case Err::OverlapError: return "OverlapError";
        case Err::LayoutMismatch: return "LayoutMismatch";
        case Err::CollectiveMismatch: return "CollectiveMismatch";
        case Err::CollectiveTimeout: return "CollectiveTimeout";
        case Err::NotInDefineMode: return "NotInDefineMode";
        case Err::NotInDataMode: return "NotInDataMode";
        case Err::DuplicateName: return "DuplicateName";
        case Err::BadDimension: return "BadDimension";
        case Err::BadId: return "BadId";
        case Err::RelocationOverflow: return "RelocationOverflow";
        case Err::IoError: return "IoError";
        case Err::FileError: return "FileError";
    }
    return "?";
}

int Schema::unlimited_dim_id() const {
    for (std::size_t i = 0; i < dimensions.size(); ++i)
        if (dimensions[i].is_unlimited) return int(i);
    return -1;
}

bool Schema::is_record_var(const Variable& v) const {
    return !v.dim_ids.empty() && v.dim_ids[0] == unlimited_dim_id() &&
           unlimited_dim_id() >= 0;
}

std::vector<std::uint64_t> Schema::var_shape(const Variable& v) const {
    std::vector<std::uint64_t> shape;
    shape.reserve(v.dim_ids.size());
    for (int d : v.dim_ids) {
        const Dimension& dim = dimensions.at(std::size_t(d));
        shape.push_back(dim.is_unlimited ? numrecs : dim.length);
    }
    return shape;
}

std::uint64_t raw_vsize(const Schema& s, const Variable& v) {
    std::uint64_t n = 1;
    const int unlim = s.unlimited_dim_id();
    for (int d : v.dim_ids)
        if (d != unlim) n *= s.dimensions.at(std::size_t(d)).length;
    return n * element_size(v.type);
}

namespace {

void check_name(const std::string& name, const char* what) {
    if (name.empty() || name.find('\0') != std::string::npos)
        throw Error(Err::InvalidSchema, std::string(what) + " name invalid: \"" + name + "\"");
}

void check_unique_atts(const std::vector<Attribute>& atts) {
    std::unordered_set<std::string> seen;
    for (const Attribute& a : atts) {
        check_name(a.name, "attribute");
        if (!seen.insert(a.name).second)
            throw Error(Err::InvalidSchema, "duplicate attribute name: " + a.name);
    }
}

}  // namespace

void Schema::validate() const {
    int unlimited_count = 0;
    std::unordered_set<std::string> names;
    for (const Dimension& d : dimensions) {
        check_name(d.name, "dimension");
        if (!names.insert(d.name).second)
            throw Error(Err::InvalidSchema, "duplicate dimension name: " + d.name);
        if (d.is_unlimited) {
            ++unlimited_count;
            if (d.length != 0)
                throw Error(Err::InvalidSchema, "unlimited dimension must store length 0");
        } else if (d.length == 0) {
            throw Error(Err::InvalidSchema, "zero-length dimension: " + d.name);
        }
    }
    if (unlimited_count > 1)
        throw Error(Err::InvalidSchema, "more than one unlimited dimension");

    check_unique_atts(global_attributes);

    const int unlim = unlimited_dim_id();
    names.clear();
    for (const Variable& v : variables) {
        check_name(v.name, "variable");
        if (!names.insert(v.name).second)
            throw Error(Err::InvalidSchema, "duplicate variable name: " + v.name);
        for (std::size_t i = 0; i < v.dim_ids.size(); ++i) {
            const int d = v.dim_ids[i];
            if (d < 0 || std::size_t(d) >= dimensions.size())
                throw Error(Err::InvalidSchema, "bad dimension id in " + v.name);
            if (d == unlim && i != 0)
                throw Error(Err::InvalidSchema,
                            "unlimited dimension not most significant in " + v.name);
        }
        check_unique_atts(v.attributes);
    }
}

}  // namespace pncdf
