#pragma once

#include <stdexcept>
#include <string>

namespace tirpforge {

/// Bad command-line usage or configuration. CLI exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data failed validation (malformed rows, bad KB entries, ...). CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant was violated. CLI exit code 3.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tirpforge
