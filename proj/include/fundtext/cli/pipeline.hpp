#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace fundtext::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;

/// Runs one subcommand. `args` excludes the program name. Writes results
/// under the configured output dir and returns the process exit code.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Files listed in a manifest whose current digest differs from the recorded
/// one (or which are missing). Empty means the outputs are intact.
std::vector<std::string> verify_manifest(const std::filesystem::path& manifest_path);

/// The subcommands in pipeline order.
const std::vector<std::string>& subcommand_names();

}  // namespace fundtext::cli
