#pragma once

#include <stdexcept>
#include <string>

namespace fliess {

// Raised when an operation would need coefficients beyond a value's
// truncation degree.
struct degree_error : std::runtime_error {
    explicit degree_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised on malformed text input (series files, tree literals,
// polynomial strings, control specs).
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an ordered basis is unusable: a non-Lyndon word where a
// Lyndon word is required, too few elements in some degree, or a
// singular straightening block.
struct basis_error : std::runtime_error {
    explicit basis_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a numerical routine produces a non-finite value.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when values built over different alphabets are combined.
struct context_error : std::logic_error {
    explicit context_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace fliess
