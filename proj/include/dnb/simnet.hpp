#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dnb/ledger.hpp"

// Seeded virtual-time model of the donation network: nodes approve each
// submitted transaction after a delay that grows with the number of
// transactions already waiting, a transaction is ready once a quorum of
// nodes approved it, and blocks cut at fixed intervals confirm every ready
// transaction. Confirmed transactions are applied to a real Chain.
namespace dnb::sim {

struct Ratio {
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  static Ratio parse(std::string_view text);  // "2/3" or "0.75"
  std::string to_string() const;
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct SimConfig {
  std::uint32_t num_nodes = 4;
  Ratio quorum_fraction{2, 3};
  std::uint64_t base_approval_delay_ms = 80'000;
  std::uint64_t per_pending_tx_delay_ms = 2'250;
  std::uint64_t jitter_ms = 0;
  std::uint64_t block_interval_ms = 45'000;
  std::uint64_t submission_interarrival_ms = 0;
  std::uint64_t seed = 1;

  /// ceil(quorum_fraction * num_nodes)
  std::uint32_t quorum() const;
  /// Throws InvalidConfig.
  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

enum class Workload { donate_storm, mixed };

Workload parse_workload(std::string_view name);
std::string_view to_string(Workload w);

struct SimMetrics {
  std::uint64_t n_txs = 0;
  std::vector<double> per_tx_latency_s;
  double mean_latency_s = 0;
  double p95_latency_s = 0;
  double makespan_s = 0;
  double tpm_avg = 0;
  double tpm_peak = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const SimMetrics&, const SimMetrics&) = default;
};

/// Reads a metric by CSV column name; "tpm" is the comparison metric
/// (tpm_peak).
double metric_value(const SimMetrics& m, std::string_view name);

enum class LogKind { Submit, Approve, Quorum, Block };

struct LogEntry {
  std::uint64_t time_ms;
  LogKind kind;
  std::uint64_t tx;     // unused for Block
  std::uint32_t node;   // Approve only
  std::uint64_t count;  // Submit: pending count; Quorum: approvals; Block: txs included
};

struct TxTrace {
  std::uint64_t submit_ms = 0;
  std::uint64_t quorum_ms = 0;
  std::uint64_t confirm_ms = 0;
  std::uint64_t pending_at_submit = 0;
  std::uint64_t block_index = 0;  // index into SimRun::block_times
};

struct SimOptions {
  bool build_chain = true;
  bool record_log = false;
};

struct SimRun {
  SimMetrics metrics;
  std::vector<TxTrace> txs;
  std::vector<std::uint64_t> block_times;  // non-empty blocks only
  std::vector<LogEntry> log;
  std::optional<Chain> chain;
};

/// Per-run seed: first 8 bytes (big-endian) of SHA-256(seed || n).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t n_txs);

/// Runs one simulation; the run's randomness comes from
/// derive_seed(config.seed, n_txs), so sweep rows equal single runs.
SimRun run_simulation(const SimConfig& config, std::uint64_t n_txs, Workload workload = Workload::donate_storm,
                      SimOptions options = {});

std::vector<SimMetrics> sweep(const SimConfig& config, std::span<const std::uint64_t> n_list,
                              Workload workload = Workload::donate_storm);

inline constexpr std::string_view kCsvHeader = "n_txs,mean_latency_s,p95_latency_s,makespan_s,tpm_avg,tpm_peak,seed";

std::string to_csv(std::span<const SimMetrics> rows);

struct CalibrationTarget {
  std::uint64_t n = 0;
  std::string metric;
  double target = 0;
};

struct SearchSpace {
  std::vector<std::uint64_t> base_approval_delay_ms;
  std::vector<std::uint64_t> per_pending_tx_delay_ms;
  std::vector<std::uint64_t> block_interval_ms;
  std::vector<std::uint64_t> submission_interarrival_ms;

  static SearchSpace defaults();
  std::size_t size() const;
};

struct Residual {
  CalibrationTarget target;
  double measured = 0;
  double relative = 0;  // (measured - target) / target
};

struct Calibration {
  SimConfig config;
  double objective = 0;
  std::vector<Residual> residuals;

  std::string report() const;
};

/// Grid search minimizing the sum of squared relative residuals, measured
/// with jitter forced to 0. Fields outside the grid come from `base`.
/// Ties keep the first grid point in iteration order.
Calibration calibrate(std::span<const CalibrationTarget> targets, const SearchSpace& space,
                      const SimConfig& base = {});

/// The four reference endpoints: latency 88 s / 180 s and 6 / 40 TPM at
/// n = 5 / 50.
std::vector<CalibrationTarget> reference_targets();

// Flat `key = value` config text with exactly the SimConfig field names.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(std::string_view text);
/// Unknown keys raise InvalidConfig unless listed in `extra_keys`.
SimConfig sim_config_from(const KeyValues& kv, std::span<const std::string_view> extra_keys = {});
std::string format_sim_config(const SimConfig& config);

SimConfig load_sim_config(const std::string& path);

}  // namespace dnb::sim
