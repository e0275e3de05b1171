#include "pncdf/dump.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "pncdf/file.hpp"
#include "pncdf/header.hpp"
#include "pncdf/values.hpp"

namespace pncdf {

namespace {

std::string format_number(ExternalType t, double v) {
    char buf[64];
    switch (t) {
        case ExternalType::BYTE:
        case ExternalType::SHORT:
        case ExternalType::INT:
            std::snprintf(buf, sizeof buf, "%lld", (long long)v);
            break;
        case ExternalType::FLOAT:
            std::snprintf(buf, sizeof buf, "%.9g", v);
            break;
        case ExternalType::DOUBLE:
            std::snprintf(buf, sizeof buf, "%.17g", v);
            break;
        case ExternalType::CHAR:
            std::snprintf(buf, sizeof buf, "%d", int(v));
            break;
    }
    return buf;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

void print_attribute(std::ostringstream& os, const std::string& owner, const Attribute& a) {
    os << "\t\t" << owner << ":" << a.name << " = ";
    if (a.type == ExternalType::CHAR) {
        os << quote(a.chars);
    } else {
        for (std::size_t i = 0; i < a.numbers.size(); ++i) {
            if (i) os << ", ";
            os << format_number(a.type, a.numbers[i]);
        }
    }
    os << " ;\n";
}

}  // namespace

std::string dump(const std::string& path, const DumpOptions& options) {
    SharedFile file = SharedFile::open(path, /*writable=*/false);
    std::uint64_t want = std::min<std::uint64_t>(file.size(), 64 << 10);
    Bytes header = file.pread(0, want);
    Schema schema;
    for (;;) {
        try {
            schema = decode_header(header);
            break;
        } catch (const Error& e) {
            if (e.code() == Err::TruncatedHeader && header.size() < file.size()) {
                want = std::min(file.size(), want * 2);
                header = file.pread(0, want);
                continue;
            }
            throw;
        }
    }

    std::ostringstream os;
    std::string title = path;
    if (auto slash = title.find_last_of('/'); slash != std::string::npos)
        title = title.substr(slash + 1);
    if (auto dot = title.find_last_of('.'); dot != std::string::npos) title = title.substr(0, dot);
    os << "netcdf " << title << " {\n";

    if (!schema.dimensions.empty()) {
        os << "dimensions:\n";
        for (const Dimension& d : schema.dimensions) {
            if (d.is_unlimited)
                os << "\t" << d.name << " = UNLIMITED ; // (" << schema.numrecs
                   << " currently)\n";
            else
                os << "\t" << d.name << " = " << d.length << " ;\n";
        }
    }

    if (!schema.variables.empty()) {
        os << "variables:\n";
        for (const Variable& v : schema.variables) {
            os << "\t" << type_name(v.type) << " " << v.name;
            if (!v.dim_ids.empty()) {
                os << "(";
                for (std::size_t i = 0; i < v.dim_ids.size(); ++i) {
                    if (i) os << ", ";
                    os << schema.dimensions[std::size_t(v.dim_ids[i])].name;
                }
                os << ")";
            }
            os << " ;\n";
            for (const Attribute& a : v.attributes) print_attribute(os, v.name, a);
        }
    }

    if (!schema.global_attributes.empty()) {
        os << "\n// global attributes:\n";
        for (const Attribute& a : schema.global_attributes) print_attribute(os, "", a);
    }

    if (!options.header_only && !schema.variables.empty()) {
        os << "data:\n";
        for (const Variable& v : schema.variables) {
            if (options.var_filter && v.name != *options.var_filter) continue;
            const auto shape = schema.var_shape(v);
            std::uint64_t nelems = 1;
            for (std::uint64_t s : shape) nelems *= s;
            os << "\n " << v.name << " = ";

            const std::uint64_t esize = element_size(v.type);
            Bytes raw;
            if (schema.is_record_var(v)) {
                std::uint64_t per_rec = nelems / std::max<std::uint64_t>(schema.numrecs, 1);
                if (schema.numrecs == 0) per_rec = 0;
                for (std::uint64_t r = 0; r < schema.numrecs; ++r) {
                    Bytes rec = file.pread(v.begin + r * schema.recsize, per_rec * esize);
                    rec.resize(per_rec * esize);
                    raw.insert(raw.end(), rec.begin(), rec.end());
                }
            } else {
                raw = file.pread(v.begin, nelems * esize);
                raw.resize(nelems * esize);
            }

            if (v.type == ExternalType::CHAR) {
                std::string text(reinterpret_cast<const char*>(raw.data()), raw.size());
                os << quote(text);
            } else {
                std::vector<double> values(nelems);
                decode_values(v.type, MemoryType::F64, raw, values.data());
                for (std::uint64_t i = 0; i < nelems; ++i) {
                    if (i) os << ", ";
                    os << format_number(v.type, values[i]);
                }
            }
            os << " ;\n";
        }
    }

    os << "}\n";
    return os.str();
}

}  // namespace pncdf
