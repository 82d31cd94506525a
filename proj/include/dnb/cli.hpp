#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "dnb/amount.hpp"
#include "dnb/simnet.hpp"

namespace dnb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

// Virtual time advanced by each interactive action.
inline constexpr std::uint64_t kActionStepMs = 1'000;

struct CliConfig {
  std::filesystem::path data_dir;
  std::string network_name = "dnb-local";
  Amount fee{1000};
  std::uint64_t max_blob = 16ull * 1024 * 1024;
  sim::SimConfig sim;

  std::filesystem::path chain_dir() const { return data_dir / "chain"; }
  std::filesystem::path blobs_dir() const { return data_dir / "blobs"; }
  std::filesystem::path wallets_dir() const { return data_dir / "wallets"; }
};

/// `key = value` file holding CliConfig fields (data_dir, network_name,
/// fee, max_blob) and any SimConfig field.
CliConfig load_cli_config(const std::filesystem::path& path);

struct Environment {
  std::optional<std::string> data_dir;  // DNB_DATA_DIR
};

/// Runs the `dnb` command line. Exit codes: 0 success, 1 domain error,
/// 2 usage error. Domain errors print `error: <Kind>: <detail>` on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const Environment& env = {});

}  // namespace dnb::cli
