#pragma once

#include <stdexcept>
#include <string>

namespace gknn {

/// Raised for malformed user input: bad files, invalid arguments, non-finite values.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an internal consistency check fails (a bug, not bad input).
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace gknn
