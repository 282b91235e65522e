#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smom {

// Input-text problems: malformed header, bad index, non-numeric token.
// Carries the 1-based line number of the offending line.
class parse_error : public std::runtime_error {
public:
    parse_error(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Structural problems: dimension mismatches, empty corpus, bad model files.
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failures: rank deficiency, tensor decomposition failure,
// degenerate moments or topics.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace smom
