#pragma once

#include <stdexcept>
#include <string>

namespace sheaflab {

// Malformed or inconsistent input: bad files, shape mismatches, violated
// preconditions. Maps to CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration or search ran out of its configured budget before reaching
// a certified answer. Maps to CLI exit code 3.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Something that the mathematics guarantees cannot happen did happen.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sheaflab
