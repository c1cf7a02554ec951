#pragma once

#include "hawkes/config.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hawkes::cli {

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_numerical = 2 };

[[nodiscard]] const std::vector<std::string>& command_names();

/// Output directory: the --out flag, else $HAWKES_OUT_DIR, else ./hawkes_out.
[[nodiscard]] std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag);

/// Shortest form that still carries 17 significant digits ("%.17g").
[[nodiscard]] std::string format_double(double x);

/// Runs one subcommand, writing its artifacts to `out_dir` and diagnostics to
/// `err`. Replica r (0-based within this run) uses seed
/// derive_seed(config.seed, config.first_replica + r).
[[nodiscard]] int run(const std::string& command, const RunConfig& config, const std::filesystem::path& out_dir,
                      std::ostream& err);

} // namespace hawkes::cli
