#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "rdpp/config.hpp"

namespace rdpp {

inline constexpr std::string_view kVersion = "0.3.0";

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericGuard = 2, kVerdictFail = 3, kInternal = 4 };

/// Maps a module exception to the documented exit code.
int exit_code_for(const std::exception& e);

std::string sha256_hex(std::string_view data);

/// Runs the configured subcommand, writes CSV artifacts plus manifest.json
/// into out_dir and returns the exit code. Errors are reported on log.
int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace rdpp
