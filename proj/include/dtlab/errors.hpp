#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dtlab {

enum class errc {
    empty_table,
    duplicate_tuple,
    bad_dimension,
    bad_decision,
    unknown_attribute,
    universe_too_small,
    unsupported,
    attribute_out_of_range,
    incompatible_system,
    resource_limit,
    parse_error,
    inconsistent_profile,
};

constexpr std::string_view errc_name(errc c) {
    switch (c) {
        case errc::empty_table: return "EmptyTable";
        case errc::duplicate_tuple: return "DuplicateTuple";
        case errc::bad_dimension: return "BadDimension";
        case errc::bad_decision: return "BadDecision";
        case errc::unknown_attribute: return "UnknownAttribute";
        case errc::universe_too_small: return "UniverseTooSmall";
        case errc::unsupported: return "Unsupported";
        case errc::attribute_out_of_range: return "AttributeOutOfRange";
        case errc::incompatible_system: return "IncompatibleSystem";
        case errc::resource_limit: return "ResourceLimit";
        case errc::parse_error: return "ParseError";
        case errc::inconsistent_profile: return "InconsistentProfile";
    }
    return "UnknownError";
}

/// All library failures are reported through this exception type; the code
/// distinguishes input errors from resource exhaustion (the CLI maps them to
/// different exit statuses).
class error : public std::runtime_error {
public:
    error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw error(code, message);
}

inline void require(bool condition, errc code, const std::string& message) {
    if (!condition) raise(code, message);
}

}  // namespace dtlab
