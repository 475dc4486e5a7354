#pragma once

#include <stdexcept>
#include <string>

namespace caged {

/// Bad argument or malformed input (exit code 1 at the CLI).
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input too large for the dense solvers.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A theorem path was requested outside its hypotheses.
class UnsupportedHypothesis : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace caged
