// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

#pragma once

#include <stdexcept>
#include <string>

namespace stripml {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates an operation's precondition.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// A file could not be opened, was truncated, or does not follow its schema.
class FormatError : public Error {
  public:
    using Error::Error;
};

/// A factorization or iterative solver failed to produce a valid solution.
class NumericalError : public Error {
  public:
    using Error::Error;
};

}  // namespace stripml
