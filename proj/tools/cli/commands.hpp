#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "bem/error.hpp"
#include "config.hpp"

namespace bem::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

struct RunOptions {
  std::optional<std::string> method;  // overrides solver.method
  std::size_t jobs = 1;
};

/// Each command writes its table to `table` and human-oriented summary
/// lines to `summary`, and returns the process exit code. Rows are emitted
/// in ascending lambda whatever the thread count.
int cmd_solve(const RunConfig& cfg, const RunOptions& opts, std::ostream& table,
              std::ostream& summary);
int cmd_scan(const RunConfig& cfg, const RunOptions& opts, std::ostream& table,
             std::ostream& summary);
int cmd_design(const RunConfig& cfg, const RunOptions& opts, std::ostream& table,
               std::ostream& summary);
int cmd_sweep(const RunConfig& cfg, const RunOptions& opts, std::ostream& table,
              std::ostream& summary);
int cmd_check(const RunConfig& cfg, const RunOptions& opts, std::ostream& table,
              std::ostream& summary);

/// Maps a library error to an exit code: configuration problems give 2.
int exit_code_for(const Error& e) noexcept;

}  // namespace bem::cli
