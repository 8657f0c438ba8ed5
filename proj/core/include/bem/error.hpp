#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bem {

enum class ErrorKind {
  parse,
  validation,
  domain,
  tip_singularity,
  no_positive_lift,
  internal,
  configuration,
  wrong_initial_guess,
  empty_bracket,
  adjoint_singular,
  invalid_design,
  unsolvable,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bem
