#include "dnb/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "dnb/identity.hpp"

namespace dnb::sim {

Ratio Ratio::parse(std::string_view text) {
  auto reduced = [](std::uint64_t num, std::uint64_t den) {
    auto g = std::gcd(num, den);
    return g == 0 ? Ratio{num, den} : Ratio{num / g, den / g};
  };
  auto bad = [&] { return Error(errc::InvalidConfig, "bad ratio '" + std::string(text) + "'"); };
  auto parse_uint = [&](std::string_view s) {
    if (s.empty() || s.size() > 18) throw bad();
    std::uint64_t v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') throw bad();
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return reduced(parse_uint(text.substr(0, slash)), parse_uint(text.substr(slash + 1)));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto frac = text.substr(dot + 1);
    std::uint64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    auto whole = dot == 0 ? 0 : parse_uint(text.substr(0, dot));
    return reduced(whole * den + (frac.empty() ? 0 : parse_uint(frac)), den);
  }
  return Ratio{parse_uint(text), 1};
}

std::string Ratio::to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

std::uint32_t SimConfig::quorum() const {
  // ceil(num * N / den)
  auto product = quorum_fraction.num * num_nodes;
  return static_cast<std::uint32_t>((product + quorum_fraction.den - 1) / quorum_fraction.den);
}

void SimConfig::validate() const {
  if (num_nodes < 1) throw Error(errc::InvalidConfig, "num_nodes must be >= 1");
  if (quorum_fraction.den == 0 || quorum_fraction.num == 0 || quorum_fraction.num > quorum_fraction.den) {
    throw Error(errc::InvalidConfig, "quorum_fraction must lie in (0, 1]");
  }
  if (quorum() < 1) throw Error(errc::InvalidConfig, "quorum must be >= 1");
  if (block_interval_ms < 1) throw Error(errc::InvalidConfig, "block_interval_ms must be >= 1");
}

Workload parse_workload(std::string_view name) {
  if (name == "donate_storm") return Workload::donate_storm;
  if (name == "mixed") return Workload::mixed;
  throw Error(errc::InvalidConfig, "unknown workload '" + std::string(name) + "'");
}

std::string_view to_string(Workload w) { return w == Workload::mixed ? "mixed" : "donate_storm"; }

double metric_value(const SimMetrics& m, std::string_view name) {
  if (name == "mean_latency_s") return m.mean_latency_s;
  if (name == "p95_latency_s") return m.p95_latency_s;
  if (name == "makespan_s") return m.makespan_s;
  if (name == "tpm_avg") return m.tpm_avg;
  if (name == "tpm_peak" || name == "tpm") return m.tpm_peak;
  throw Error(errc::InvalidConfig, "unknown metric '" + std::string(name) + "'");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t n_txs) {
  Writer w;
  w.u64(seed);
  w.u64(n_txs);
  auto digest = crypto::sha256(w.bytes());
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out = (out << 8) | digest.bytes[i];
  return out;
}

namespace {

constexpr std::uint64_t kMinuteMs = 60'000;
constexpr std::uint64_t kCampaignLengthMs = 365ull * 24 * 3600 * 1000;

// Builds the signed transaction stream and applies confirmed batches.
// Every transaction has its own sender at nonce 0, so any confirmation
// order the network produces is a valid chain order.
class WorkloadChain {
 public:
  WorkloadChain(std::uint64_t seed, std::uint64_t n, Workload workload) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    auto organizer = KeyPair::generate(derive_seed(seed, ~0ull));
    std::vector<KeyPair> senders;
    senders.reserve(n);
    GenesisParams params;
    params.allocations.emplace_back(address_of(organizer.public_key), Amount::tokens(1'000'000));
    for (std::uint64_t i = 0; i < n; ++i) {
      senders.push_back(KeyPair::generate(derive_seed(seed, i)));
      params.allocations.emplace_back(address_of(senders.back().public_key), Amount::tokens(1'000));
    }
    chain_.emplace(Chain::create(std::move(params)));

    // Setup block at t = 0 opens the campaigns the stream donates to.
    const int setup_events = workload == Workload::mixed ? 2 : 1;
    std::vector<Transaction> setup;
    for (int k = 0; k < setup_events; ++k) {
      setup.push_back(make_create(organizer, static_cast<std::uint64_t>(k), "campaign " + std::to_string(k)));
    }
    chain_->extend(setup, Timestamp{0});
    for (const auto& tx : setup) events_.push_back(tx.tx_hash);

    txs_.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto& keys = senders[i];
      if (workload == Workload::mixed && i % 4 == 3) {
        txs_.push_back(make_create(keys, 0, "stream campaign " + std::to_string(i)));
      } else {
        Transaction tx;
        tx.sender_pk = keys.public_key;
        tx.fee = chain_->fee();
        auto amount = Amount::tokens(1 + rng() % 10);
        tx.payload = DonatePayload{events_[i % events_.size()], amount};
        txs_.push_back(sign_transaction(std::move(tx), keys.secret));
      }
    }
  }

  void confirm(std::span<const std::uint64_t> indices, std::uint64_t time_ms) {
    std::vector<Transaction> batch;
    batch.reserve(indices.size());
    for (auto i : indices) batch.push_back(txs_[i]);
    chain_->extend(batch, Timestamp{time_ms});
  }

  Chain take() && { return std::move(*chain_); }

 private:
  Transaction make_create(const KeyPair& keys, std::uint64_t nonce, std::string title) const {
    Transaction tx;
    tx.sender_pk = keys.public_key;
    tx.nonce = nonce;
    tx.fee = chain_->fee();
    CreateEventPayload p;
    p.owner = address_of(keys.public_key);
    p.owner_name = "simulated organizer";
    p.title = std::move(title);
    p.description = "generated by the network simulator";
    p.target = Amount::tokens(1'000);
    p.deadline = Timestamp{kCampaignLengthMs};
    p.image = Cid::of(as_bytes(p.title));
    tx.payload = std::move(p);
    return sign_transaction(std::move(tx), keys.secret);
  }

  std::optional<Chain> chain_;
  std::vector<Hash32> events_;
  std::vector<Transaction> txs_;
};

// Same-time events resolve approvals first, then block cuts, then
// submissions: a transaction whose quorum lands exactly at a block time is
// included, and a submission at a block time sees that block's effect on
// the pending count.
enum class EventClass : std::uint8_t { Approve = 0, Block = 1, Submit = 2 };

struct QueuedEvent {
  std::uint64_t time;
  EventClass cls;
  std::uint64_t seq;
  std::uint64_t tx;
  std::uint32_t node;

  friend bool operator>(const QueuedEvent& a, const QueuedEvent& b) {
    return std::tie(a.time, a.cls, a.seq) > std::tie(b.time, b.cls, b.seq);
  }
};

SimMetrics summarize(const std::vector<TxTrace>& txs, std::uint64_t seed) {
  SimMetrics m;
  m.n_txs = txs.size();
  m.seed = seed;
  if (txs.empty()) return m;

  m.per_tx_latency_s.reserve(txs.size());
  double sum = 0;
  for (const auto& t : txs) {
    double lat = static_cast<double>(t.confirm_ms - t.submit_ms) / 1000.0;
    m.per_tx_latency_s.push_back(lat);
    sum += lat;
  }
  m.mean_latency_s = sum / static_cast<double>(txs.size());

  auto sorted = m.per_tx_latency_s;
  std::sort(sorted.begin(), sorted.end());
  // nearest rank
  auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(sorted.size())));
  m.p95_latency_s = sorted[std::max<std::size_t>(rank, 1) - 1];

  std::uint64_t first_submit = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t last_confirm = 0;
  std::vector<std::uint64_t> confirms;
  confirms.reserve(txs.size());
  for (const auto& t : txs) {
    first_submit = std::min(first_submit, t.submit_ms);
    last_confirm = std::max(last_confirm, t.confirm_ms);
    confirms.push_back(t.confirm_ms);
  }
  m.makespan_s = static_cast<double>(last_confirm - first_submit) / 1000.0;
  m.tpm_avg = m.makespan_s > 0 ? static_cast<double>(txs.size()) / (m.makespan_s / 60.0) : 0.0;

  // Max confirmations inside any window [t, t + 60 s); it suffices to
  // start windows at confirmation times.
  std::sort(confirms.begin(), confirms.end());
  std::size_t best = 0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < confirms.size(); ++lo) {
    while (hi < confirms.size() && confirms[hi] < confirms[lo] + kMinuteMs) ++hi;
    best = std::max(best, hi - lo);
  }
  m.tpm_peak = static_cast<double>(best);
  return m;
}

}  // namespace

SimRun run_simulation(const SimConfig& config, std::uint64_t n_txs, Workload workload, SimOptions options) {
  config.validate();
  const std::uint64_t seed = derive_seed(config.seed, n_txs);
  const std::uint32_t quorum = config.quorum();

  SimRun run;
  run.txs.resize(n_txs);
  if (n_txs == 0) {
    run.metrics = summarize(run.txs, seed);
    if (options.build_chain) run.chain.emplace(WorkloadChain(seed, 0, workload).take());
    return run;
  }

  std::optional<WorkloadChain> workload_chain;
  if (options.build_chain) workload_chain.emplace(seed, n_txs, workload);

  std::mt19937_64 rng(seed);
  std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, std::greater<>> queue;
  std::uint64_t seq = 0;
  auto log = [&](LogEntry e) {
    if (options.record_log) run.log.push_back(e);
  };

  for (std::uint64_t i = 0; i < n_txs; ++i) {
    queue.push({i * config.submission_interarrival_ms, EventClass::Submit, seq++, i, 0});
  }
  queue.push({config.block_interval_ms, EventClass::Block, seq++, 0, 0});

  std::vector<std::uint32_t> approvals(n_txs, 0);
  std::set<std::uint64_t> ready;
  std::uint64_t submitted = 0;
  std::uint64_t confirmed = 0;

  while (!queue.empty()) {
    auto ev = queue.top();
    queue.pop();
    switch (ev.cls) {
      case EventClass::Submit: {
        auto& trace = run.txs[ev.tx];
        trace.submit_ms = ev.time;
        trace.pending_at_submit = submitted - confirmed;
        ++submitted;
        log({ev.time, LogKind::Submit, ev.tx, 0, trace.pending_at_submit});
        const auto delay = config.base_approval_delay_ms + config.per_pending_tx_delay_ms * trace.pending_at_submit;
        for (std::uint32_t node = 0; node < config.num_nodes; ++node) {
          std::uint64_t noise = config.jitter_ms == 0 ? 0 : rng() % (config.jitter_ms + 1);
          queue.push({ev.time + delay + noise, EventClass::Approve, seq++, ev.tx, node});
        }
        break;
      }
      case EventClass::Approve: {
        log({ev.time, LogKind::Approve, ev.tx, ev.node, 0});
        if (++approvals[ev.tx] == quorum) {
          run.txs[ev.tx].quorum_ms = ev.time;
          ready.insert(ev.tx);
          log({ev.time, LogKind::Quorum, ev.tx, 0, quorum});
        }
        break;
      }
      case EventClass::Block: {
        if (!ready.empty()) {
          std::vector<std::uint64_t> batch(ready.begin(), ready.end());
          ready.clear();
          for (auto i : batch) {
            run.txs[i].confirm_ms = ev.time;
            run.txs[i].block_index = run.block_times.size();
          }
          run.block_times.push_back(ev.time);
          confirmed += batch.size();
          if (workload_chain) workload_chain->confirm(batch, ev.time);
          log({ev.time, LogKind::Block, 0, 0, batch.size()});
        }
        if (confirmed < n_txs) queue.push({ev.time + config.block_interval_ms, EventClass::Block, seq++, 0, 0});
        break;
      }
    }
  }

  run.metrics = summarize(run.txs, seed);
  if (workload_chain) run.chain.emplace(std::move(*workload_chain).take());
  return run;
}

std::vector<SimMetrics> sweep(const SimConfig& config, std::span<const std::uint64_t> n_list, Workload workload) {
  std::vector<SimMetrics> out;
  out.reserve(n_list.size());
  for (auto n : n_list) out.push_back(run_simulation(config, n, workload).metrics);
  return out;
}

namespace {

std::string fixed6(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

std::string to_csv(std::span<const SimMetrics> rows) {
  std::string out{kCsvHeader};
  out += '\n';
  for (const auto& m : rows) {
    out += std::to_string(m.n_txs) + "," + fixed6(m.mean_latency_s) + "," + fixed6(m.p95_latency_s) + "," +
           fixed6(m.makespan_s) + "," + fixed6(m.tpm_avg) + "," + fixed6(m.tpm_peak) + "," + std::to_string(m.seed) +
           "\n";
  }
  return out;
}

namespace {

std::vector<std::uint64_t> range_ms(std::uint64_t from, std::uint64_t to, std::uint64_t step) {
  std::vector<std::uint64_t> out;
  for (auto v = from; v <= to; v += step) out.push_back(v);
  return out;
}

}  // namespace

SearchSpace SearchSpace::defaults() {
  return SearchSpace{range_ms(10'000, 120'000, 5'000), range_ms(0, 5'000, 250), range_ms(5'000, 60'000, 5'000),
                     range_ms(0, 10'000, 1'000)};
}

std::size_t SearchSpace::size() const {
  return base_approval_delay_ms.size() * per_pending_tx_delay_ms.size() * block_interval_ms.size() *
         submission_interarrival_ms.size();
}

Calibration calibrate(std::span<const CalibrationTarget> targets, const SearchSpace& space, const SimConfig& base) {
  if (space.size() == 0) throw Error(errc::EmptySearchSpace);
  if (targets.empty()) throw Error(errc::InvalidConfig, "no calibration targets");
  for (const auto& t : targets) {
    if (t.target == 0) throw Error(errc::InvalidConfig, "calibration target must be non-zero");
    (void)metric_value(SimMetrics{}, t.metric);
  }

  std::vector<std::uint64_t> ns;
  for (const auto& t : targets) {
    if (std::find(ns.begin(), ns.end(), t.n) == ns.end()) ns.push_back(t.n);
  }

  std::optional<Calibration> best;
  SimConfig candidate = base;
  candidate.jitter_ms = 0;
  const SimOptions metrics_only{false, false};
  std::map<std::uint64_t, SimMetrics> measured;

  for (auto b : space.base_approval_delay_ms) {
    for (auto p : space.per_pending_tx_delay_ms) {
      for (auto blk : space.block_interval_ms) {
        for (auto a : space.submission_interarrival_ms) {
          candidate.base_approval_delay_ms = b;
          candidate.per_pending_tx_delay_ms = p;
          candidate.block_interval_ms = blk;
          candidate.submission_interarrival_ms = a;
          if (blk == 0) continue;
          measured.clear();
          for (auto n : ns) measured[n] = run_simulation(candidate, n, Workload::donate_storm, metrics_only).metrics;

          double objective = 0;
          for (const auto& t : targets) {
            double rel = (metric_value(measured[t.n], t.metric) - t.target) / t.target;
            objective += rel * rel;
          }
          if (best && objective >= best->objective) continue;

          Calibration c;
          c.config = candidate;
          c.objective = objective;
          for (const auto& t : targets) {
            double v = metric_value(measured[t.n], t.metric);
            c.residuals.push_back(Residual{t, v, (v - t.target) / t.target});
          }
          best = std::move(c);
        }
      }
    }
  }
  if (!best) throw Error(errc::EmptySearchSpace, "no grid point has a positive block interval");
  return *best;
}

std::vector<CalibrationTarget> reference_targets() {
  return {{5, "mean_latency_s", 88.0}, {50, "mean_latency_s", 180.0}, {5, "tpm", 6.0}, {50, "tpm", 40.0}};
}

std::string Calibration::report() const {
  std::ostringstream os;
  os << "# calibration residuals (jitter_ms = 0)\n";
  os << "objective = " << fixed6(objective) << "\n";
  os << "n,metric,target,measured,relative_residual\n";
  for (const auto& r : residuals) {
    os << r.target.n << "," << r.target.metric << "," << fixed6(r.target.target) << "," << fixed6(r.measured) << ","
       << fixed6(r.relative) << "\n";
  }
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  if (value.empty() || value.size() > 19 ||
      !std::all_of(value.begin(), value.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(errc::InvalidConfig, key + " must be an unsigned integer, got '" + value + "'");
  }
  return std::stoull(value);
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(errc::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key{trim(line.substr(0, eq))};
    std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) throw Error(errc::InvalidConfig, "line " + std::to_string(line_no) + ": empty key");
    if (!seen.insert(key).second) throw Error(errc::InvalidConfig, "duplicate key " + key);
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

SimConfig sim_config_from(const KeyValues& kv, std::span<const std::string_view> extra_keys) {
  SimConfig c;
  for (const auto& [key, value] : kv) {
    if (key == "num_nodes") {
      auto v = parse_u64(key, value);
      if (v > std::numeric_limits<std::uint32_t>::max()) throw Error(errc::InvalidConfig, "num_nodes too large");
      c.num_nodes = static_cast<std::uint32_t>(v);
    } else if (key == "quorum_fraction") {
      c.quorum_fraction = Ratio::parse(value);
    } else if (key == "base_approval_delay_ms") {
      c.base_approval_delay_ms = parse_u64(key, value);
    } else if (key == "per_pending_tx_delay_ms") {
      c.per_pending_tx_delay_ms = parse_u64(key, value);
    } else if (key == "jitter_ms") {
      c.jitter_ms = parse_u64(key, value);
    } else if (key == "block_interval_ms") {
      c.block_interval_ms = parse_u64(key, value);
    } else if (key == "submission_interarrival_ms") {
      c.submission_interarrival_ms = parse_u64(key, value);
    } else if (key == "seed") {
      c.seed = parse_u64(key, value);
    } else if (std::find(extra_keys.begin(), extra_keys.end(), key) == extra_keys.end()) {
      throw Error(errc::InvalidConfig, "unknown key " + key);
    }
  }
  c.validate();
  return c;
}

std::string format_sim_config(const SimConfig& c) {
  std::ostringstream os;
  os << "num_nodes = " << c.num_nodes << "\n"
     << "quorum_fraction = " << c.quorum_fraction.to_string() << "\n"
     << "base_approval_delay_ms = " << c.base_approval_delay_ms << "\n"
     << "per_pending_tx_delay_ms = " << c.per_pending_tx_delay_ms << "\n"
     << "jitter_ms = " << c.jitter_ms << "\n"
     << "block_interval_ms = " << c.block_interval_ms << "\n"
     << "submission_interarrival_ms = " << c.submission_interarrival_ms << "\n"
     << "seed = " << c.seed << "\n";
  return os.str();
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::IoError, "cannot read " + path);
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return sim_config_from(parse_key_values(text));
}

}  // namespace dnb::sim
