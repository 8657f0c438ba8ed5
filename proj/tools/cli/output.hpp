#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bem::cli {

/// One CSV line. Empty optionals are written as empty fields.
struct OutputRow {
  double lambda = 0.0;
  std::optional<double> gamma;
  std::optional<double> chord;
  std::optional<double> phi;
  std::optional<double> alpha;
  std::optional<double> a;
  std::optional<double> a_prime;
  std::optional<double> F;
  std::optional<double> residual;
  std::optional<long long> iterations;
  std::string method;
  std::optional<double> J;
  std::string root_category;
  std::string status;

  bool operator==(const OutputRow&) const = default;
};

inline constexpr const char* kOutputHeader =
    "lambda,gamma,chord,phi,alpha,a,a_prime,F,residual,iterations,method,J,root_category,status";

/// Shortest decimal string that reads back to the same double.
std::string format_number(double x);

void write_rows(std::ostream& out, const std::vector<OutputRow>& rows);
/// Inverse of write_rows; throws Error(parse) on a malformed table.
std::vector<OutputRow> read_rows(std::istream& in);

}  // namespace bem::cli
