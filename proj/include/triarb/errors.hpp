#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace triarb {

/// Bad user input: out-of-range indices, malformed rules, shape mismatches.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed configuration; the message names the offending field.
struct config_error : validation_error {
    using validation_error::validation_error;
};

/// A numeric routine failed to reach its certified tolerance.
struct numeric_error : std::runtime_error {
    numeric_error(const std::string& what, double residual)
        : std::runtime_error(what), residual(residual) {}
    double residual;
};

/// Degenerate polytope input (not full-dimensional, too few vertices, ...).
struct geometry_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A search exceeded its configured work cap; carries progress so far.
struct budget_error : std::runtime_error {
    budget_error(const std::string& what, std::uint64_t done, std::uint64_t cap)
        : std::runtime_error(what), done(done), cap(cap) {}
    std::uint64_t done;
    std::uint64_t cap;
};

}  // namespace triarb
