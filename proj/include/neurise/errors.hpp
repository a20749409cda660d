#pragma once

#include <stdexcept>
#include <string>

namespace neurise {

/// Caller passed arguments violating a documented precondition.
struct invalid_input : std::runtime_error {
    explicit invalid_input(const std::string& msg) : std::runtime_error(msg) {}
};

/// A requested enumeration or expansion exceeds the configured size cap.
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file. Carries the location that failed to parse.
struct parse_error : std::runtime_error {
    parse_error(const std::string& file, long line, const std::string& msg)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg),
          file(file),
          line(line) {}
    std::string file;
    long line;
};

/// An iterative solver aborted (non-finite loss, bad state). Distinct from
/// returning converged=false, which is a valid result.
struct solver_error : std::runtime_error {
    explicit solver_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A user-supplied callback broke its contract (e.g. a conditional provider
/// returned a non-distribution).
struct contract_violation : std::runtime_error {
    explicit contract_violation(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace neurise
