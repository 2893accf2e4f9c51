// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace ence {

// Base class for everything this library throws on purpose.
//
// The four subclasses partition failures the same way the CLI reports them
// (exit codes 1..4): bad parameters, invalid density matrices, numerical
// breakdown, and file-level I/O.  Messages start with a short CamelCase tag
// naming the violated precondition ("TraceNotOne: ...") so callers can match
// on it without parsing prose.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Unusable arguments: unknown names, out-of-range parameters, wrong arity.
class ArgumentError : public Error {
public:
  using Error::Error;
};

// A matrix that was supposed to be a density matrix is not one (also used
// for unparseable state files, since those fail to describe any state).
class ValidationError : public Error {
public:
  using Error::Error;
};

// Eigensolver non-convergence or a result outside its mathematical range.
class NumericalError : public Error {
public:
  using Error::Error;
};

// Could not open, read, or write a file.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace ence
