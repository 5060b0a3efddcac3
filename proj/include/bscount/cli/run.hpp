#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace bscount::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kParseError = 2, kIoError = 3 };

struct CliOptions {
  std::string config_path;
  std::optional<std::string> config_text;  // in-memory document instead of a file
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

/// Parses the config, runs the named pipeline and writes the report files.
int run(const CliOptions& opts);

/// argv front end: --config, --jobs, --seed, --out.
int main_entry(int argc, char** argv);

const char* version();

}  // namespace bscount::cli
