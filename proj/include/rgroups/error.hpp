#pragma once

#include <stdexcept>
#include <string>

namespace rgroups {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation ran out of its configured budget (states, cosets, elements,
// memory). Carries how far it got.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, long long reached)
      : Error(what), reached_(reached) {}

  long long reached() const noexcept { return reached_; }

 private:
  long long reached_;
};

}  // namespace rgroups
