#pragma once

#include <optional>
#include <string>

namespace pncdf {

struct DumpOptions {
    bool header_only = false;
    std::optional<std::string> var_filter;  // data for one variable only
};

/// Deterministic CDL-style text listing of a classic file: dimensions,
/// variables with types/shapes/attributes, optionally data in row-major
/// order. DOUBLE prints with 17 significant digits, FLOAT with 9.
/// Decode errors surface as Error with the failing byte offset.
std::string dump(const std::string& path, const DumpOptions& options = {});

}  // namespace pncdf
