#pragma once

#include <stdexcept>
#include <string>

namespace dimer {

/// Base for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A well-formed request that has no answer for this input, e.g. a model
/// without perfect matchings or a degenerate polygon where a 2-dimensional
/// one is required.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed input data (unknown ids, bad JSON shape, invalid model).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A postcondition of an algorithm failed. Seeing one of these means the
/// implementation is wrong, not the input.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace dimer
