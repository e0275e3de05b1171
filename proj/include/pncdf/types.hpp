#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pncdf/error.hpp"

namespace pncdf {

/// External (on-file) element types of the classic container.
enum class ExternalType : std::int32_t {
    BYTE = 1,    // 1-byte signed
    CHAR = 2,    // 1-byte text
    SHORT = 3,   // 2-byte signed
    INT = 4,     // 4-byte signed
    FLOAT = 5,   // IEEE-754 single
    DOUBLE = 6,  // IEEE-754 double
};

std::size_t element_size(ExternalType t);
const char* type_name(ExternalType t);
bool valid_external_type(std::int32_t code);

/// Length value marking a dimension as the unlimited (record) dimension.
inline constexpr std::uint64_t kUnlimited = 0;

struct Dimension {
    std::string name;
    std::uint64_t length = 0;  // 0 when unlimited
    bool is_unlimited = false;

    bool operator==(const Dimension&) const = default;
};

/// Attribute payload: CHAR attributes hold `chars`, everything else holds
/// `numbers` (doubles carry all classic types exactly).
struct Attribute {
    std::string name;
    ExternalType type = ExternalType::CHAR;
    std::string chars;
    std::vector<double> numbers;

    std::size_t nelems() const {
        return type == ExternalType::CHAR ? chars.size() : numbers.size();
    }
    bool operator==(const Attribute&) const = default;
};

struct Variable {
    std::string name;
    ExternalType type = ExternalType::DOUBLE;
    std::vector<int> dim_ids;  // most significant first
    std::vector<Attribute> attributes;
    std::uint64_t vsize = 0;  // computed
    std::uint64_t begin = 0;  // computed
    int var_id = -1;

    bool operator==(const Variable&) const = default;
};

/// In-memory image of the file header plus computed layout.
struct Schema {
    std::vector<Dimension> dimensions;
    std::vector<Attribute> global_attributes;
    std::vector<Variable> variables;
    std::uint64_t numrecs = 0;
    std::uint64_t data_begin = 0;
    std::uint64_t recsize = 0;
    int format_version = 1;  // CDF-1 only

    bool operator==(const Schema&) const = default;

    int unlimited_dim_id() const;  // -1 when none
    bool is_record_var(const Variable& v) const;
    /// Non-record element counts of v, most significant first; record
    /// variables report their record dimension as numrecs.
    std::vector<std::uint64_t> var_shape(const Variable& v) const;

    /// Full invariant check; throws InvalidSchema on violation.
    void validate() const;
};

/// Dense per-record payload size of a variable before the classic
/// single-record-variable exception is applied.
std::uint64_t raw_vsize(const Schema& s, const Variable& v);

}  // namespace pncdf
