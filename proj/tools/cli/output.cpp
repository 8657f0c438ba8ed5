#include "output.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "bem/error.hpp"

namespace bem::cli {
namespace {

void put(std::ostream& out, const std::optional<double>& x) {
  if (x) out << format_number(*x);
}

std::optional<double> get_number(const std::string& field, std::size_t line) {
  if (field.empty()) return std::nullopt;
  double x = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, x);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::parse, "line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return x;
}

}  // namespace

std::string format_number(double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw Error(ErrorKind::internal, "number formatting failed");
  return std::string(buf.data(), ptr);
}

void write_rows(std::ostream& out, const std::vector<OutputRow>& rows) {
  out << kOutputHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.lambda) << ',';
    put(out, r.gamma);
    out << ',';
    put(out, r.chord);
    out << ',';
    put(out, r.phi);
    out << ',';
    put(out, r.alpha);
    out << ',';
    put(out, r.a);
    out << ',';
    put(out, r.a_prime);
    out << ',';
    put(out, r.F);
    out << ',';
    put(out, r.residual);
    out << ',';
    if (r.iterations) out << *r.iterations;
    out << ',' << r.method << ',';
    put(out, r.J);
    out << ',' << r.root_category << ',' << r.status << '\n';
  }
}

std::vector<OutputRow> read_rows(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kOutputHeader) {
    throw Error(ErrorKind::parse, "line 1: unexpected header");
  }
  std::vector<OutputRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 14) {
      throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": expected 14 fields");
    }
    OutputRow r;
    const auto lambda = get_number(f[0], lineno);
    if (!lambda) throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": lambda missing");
    r.lambda = *lambda;
    r.gamma = get_number(f[1], lineno);
    r.chord = get_number(f[2], lineno);
    r.phi = get_number(f[3], lineno);
    r.alpha = get_number(f[4], lineno);
    r.a = get_number(f[5], lineno);
    r.a_prime = get_number(f[6], lineno);
    r.F = get_number(f[7], lineno);
    r.residual = get_number(f[8], lineno);
    if (!f[9].empty()) {
      long long n = 0;
      const auto* end = f[9].data() + f[9].size();
      const auto [ptr, ec] = std::from_chars(f[9].data(), end, n);
      if (ec != std::errc() || ptr != end) {
        throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": bad iteration count");
      }
      r.iterations = n;
    }
    r.method = f[10];
    r.J = get_number(f[11], lineno);
    r.root_category = f[12];
    r.status = f[13];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace bem::cli
