#pragma once

#include <stdexcept>
#include <string>

namespace platoon {

// Caller supplied an argument outside an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Destination hub cannot be reached from the origin.
class NoRouteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A schedule or decision problem violates its delivery deadline.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumeration would exceed the configured combination guard.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation not allowed in the current state of a stateful object
// (e.g. registering a truck twice on the hub board).
class InvalidStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed or inconsistent input file.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace platoon
