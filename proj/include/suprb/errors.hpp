#pragma once

#include <stdexcept>
#include <string>

namespace suprb {

/// Caller violated a documented precondition (bad dimensions, out-of-range
/// parameters, unknown config keys). The CLI maps this to exit code 1.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data or a model file is malformed. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace suprb
