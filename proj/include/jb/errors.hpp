#pragma once

#include <stdexcept>

namespace jb {

// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input data (a sample, a table or fit file) cannot be used.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numeric procedure cannot produce a trustworthy result.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace jb
