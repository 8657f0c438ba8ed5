#include "bem/error.hpp"

namespace bem {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::domain: return "domain";
    case ErrorKind::tip_singularity: return "tip_singularity";
    case ErrorKind::no_positive_lift: return "no_positive_lift";
    case ErrorKind::internal: return "internal";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::wrong_initial_guess: return "wrong_initial_guess";
    case ErrorKind::empty_bracket: return "empty_bracket";
    case ErrorKind::adjoint_singular: return "adjoint_singular";
    case ErrorKind::invalid_design: return "invalid_design";
    case ErrorKind::unsolvable: return "unsolvable";
  }
  return "unknown";
}

}  // namespace bem
