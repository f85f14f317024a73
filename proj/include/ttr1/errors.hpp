#pragma once

#include <stdexcept>
#include <string>

namespace ttr1 {

/// Invalid caller input: bad shapes, out-of-range arguments, malformed files.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Failure inside a numerical kernel (e.g. an SVD that did not converge).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ttr1
