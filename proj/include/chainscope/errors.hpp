#pragma once

#include <stdexcept>
#include <string>

namespace chainscope {

/// Bad input: violated invariants, malformed configuration, unmet preconditions.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The numerics could not deliver a trustworthy answer (no convergence,
/// broken bond, unresolved peaks).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failure; the message carries the offending path.
class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(what + ": " + path), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace chainscope
