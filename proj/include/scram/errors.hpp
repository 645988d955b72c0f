#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scram {

/// Malformed input data (files, descriptors, scenarios).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parse failure at a known line of an alist stream.
class AlistError : public InputError {
public:
    AlistError(std::size_t line, const std::string& detail, const std::string& source = {})
        : InputError((source.empty() ? "" : source + ": ") + "line " + std::to_string(line) + ": " + detail),
          line_(line), detail_(detail) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::string detail_;
};

/// An exhaustive computation would exceed its configured work limit.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace scram
