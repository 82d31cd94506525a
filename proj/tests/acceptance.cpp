// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "dnb/cli.hpp"
#include "dnb/simnet.hpp"
#include "support.hpp"

using namespace dnb;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances.
constexpr double kLatencyTolerance = 0.15;
constexpr double kTpmTolerance = 0.25;
constexpr double kSweepWallSeconds = 5.0;
constexpr double kWorkflowWallSeconds = 1.0;
constexpr double kLatencyTargetN5 = 88.0;
constexpr double kLatencyTargetN50 = 180.0;
constexpr double kTpmTargetN5 = 6.0;
constexpr double kTpmTargetN50 = 40.0;

constexpr int kConservationWorkloads = 200;
constexpr int kConservationTxs = 1000;
constexpr int kTamperTrials = 100;
constexpr int kTamperBlocks = 20;
constexpr int kCryptoTrials = 1000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool within(double measured, double target, double tol) {
  return std::fabs(measured - target) <= tol * target;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

sim::SimConfig calibrated_config() {
  return sim::load_sim_config((std::filesystem::path(DNB_SOURCE_DIR) / "calibrated.cfg").string());
}

std::vector<sim::SimMetrics> calibrated_sweep(double& wall) {
  auto cfg = calibrated_config();
  cfg.jitter_ms = 0;
  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = 5; n <= 50; n += 5) ns.push_back(n);
  auto t0 = Clock::now();
  auto rows = sim::sweep(cfg, ns);
  wall = seconds_since(t0);
  return rows;
}

Outcome endpoint_fit(const char* metric, double t5, double t50, double tol, bool timed) {
  double wall = 0;
  auto rows = calibrated_sweep(wall);
  Outcome o;
  auto v5 = sim::metric_value(rows.front(), metric);
  auto v50 = sim::metric_value(rows.back(), metric);
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    monotone = monotone && sim::metric_value(rows[i], metric) >= sim::metric_value(rows[i - 1], metric);
  }
  o.pass = within(v5, t5, tol) && within(v50, t50, tol) && monotone && (!timed || wall < kSweepWallSeconds);
  o.detail = std::string(metric) + " n=5 " + fmt(v5) + " (target " + fmt(t5) + "), n=50 " + fmt(v50) + " (target " +
             fmt(t50) + "), tolerance " + fmt(tol * 100) + "%, monotone " + (monotone ? "yes" : "no");
  if (timed) o.detail += ", sweep " + fmt(wall) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// Conservation against a brute-force debit/credit ledger.

struct AccountingOracle {
  struct Event {
    Address owner;
    Amount target;
    Timestamp deadline;
    Amount pool;
    Amount total;
    bool open = true;
  };
  std::map<Address, Amount> balance;
  std::map<Hash32, Event> events;
  std::vector<Hash32> order;
  Amount fee;

  Amount total() const {
    Amount t;
    for (const auto& [a, v] : balance) t += v;
    for (const auto& [id, e] : events) t += e.pool;
    return t;
  }

  // Mirrors a block from its contents alone.
  void apply_block(const Block& b) {
    for (const auto& id : order) {
      auto& e = events[id];
      if (e.open && e.deadline <= b.timestamp) {
        e.open = false;
        if (e.total >= e.target) {
          balance[e.owner] += e.pool;
          e.pool = Amount{};
        }
      }
    }
    for (const auto& tx : b.transactions) {
      if (const auto* r = std::get_if<RefundPayload>(&tx.payload)) {
        events[r->event_id].pool -= r->amount;
        balance[r->recipient] += r->amount;
        continue;
      }
      auto sender = address_of(tx.sender_pk);
      balance[sender] -= tx.fee;
      balance[kFeeSink] += tx.fee;
      if (const auto* d = std::get_if<DonatePayload>(&tx.payload)) {
        balance[sender] -= d->amount;
        events[d->event_id].pool += d->amount;
        events[d->event_id].total += d->amount;
      } else if (const auto* c = std::get_if<CreateEventPayload>(&tx.payload)) {
        events[tx.tx_hash] = Event{c->owner, c->target, c->deadline, {}, {}, true};
        order.push_back(tx.tx_hash);
      }
    }
  }
};

bool conservation_workload(std::uint64_t seed, std::string& why) {
  std::mt19937_64 rng(seed);
  const std::size_t n_wallets = 8 + rng() % 8;
  std::vector<Wallet> wallets;
  GenesisParams g;
  for (std::size_t i = 0; i < n_wallets; ++i) {
    wallets.push_back(new_wallet("w", seed * 1000 + i));
    g.allocations.emplace_back(wallets.back().address, Amount(1'000'000 + rng() % 1'000'000));
  }
  auto chain = Chain::create(g);
  AccountingOracle oracle;
  oracle.fee = chain.fee();
  for (const auto& [a, v] : g.allocations) oracle.balance[a] = v;
  const auto initial = oracle.total();
  std::map<Address, std::uint64_t> nonce;

  int sent = 0;
  while (sent < kConservationTxs) {
    auto ts = chain.tip().timestamp.plus_ms(1'000 + rng() % 9'000);
    std::vector<Transaction> batch;
    std::set<Address> spent;  // one tx per sender per block keeps the oracle's view exact
    auto batch_size = 1 + rng() % 16;
    for (std::size_t k = 0; k < batch_size && sent < kConservationTxs; ++k) {
      const auto& w = wallets[rng() % n_wallets];
      if (spent.contains(w.address)) continue;
      Transaction tx;
      tx.sender_pk = w.keys.public_key;
      tx.fee = chain.fee();
      std::vector<Hash32> open;
      for (const auto& id : oracle.order) {
        const auto& e = oracle.events[id];
        if (e.open && ts < e.deadline) open.push_back(id);
      }
      auto bal = oracle.balance[w.address];
      if (open.empty() || rng() % 6 == 0) {
        if (bal < chain.fee()) continue;
        auto p = test::event_payload(w, Amount(1 + rng() % 40'000), ts.plus_ms(5'000 + rng() % 60'000));
        tx.payload = p;
      } else {
        Amount amt(1 + rng() % 5'000);
        if (bal < amt + chain.fee()) continue;
        tx.payload = DonatePayload{open[rng() % open.size()], amt};
      }
      tx.nonce = nonce[w.address]++;
      batch.push_back(sign_transaction(std::move(tx), w.keys.secret));
      spent.insert(w.address);
      ++sent;
    }
    try {
      const auto& b = chain.extend(batch, ts);
      oracle.apply_block(b);
    } catch (const Error& e) {
      why = "workload " + std::to_string(seed) + ": block rejected: " + e.what();
      return false;
    }
    if (oracle.total() != initial || chain.state().total_supply() != initial) {
      why = "workload " + std::to_string(seed) + ": supply drift at height " + std::to_string(chain.height());
      return false;
    }
    for (const auto& [a, v] : oracle.balance) {
      if (chain.state().balance_of(a) != v) {
        why = "workload " + std::to_string(seed) + ": balance mismatch for " + a.hex();
        return false;
      }
    }
    for (const auto& [id, e] : oracle.events) {
      if (chain.state().find_event(id)->pool != e.pool) {
        why = "workload " + std::to_string(seed) + ": pool mismatch for " + id.hex();
        return false;
      }
    }
  }
  return true;
}

Outcome conservation() {
  Outcome o;
  auto t0 = Clock::now();
  int passed = 0;
  for (int w = 0; w < kConservationWorkloads; ++w) {
    std::string why;
    if (conservation_workload(static_cast<std::uint64_t>(w) + 1, why)) {
      ++passed;
    } else if (o.pass) {
      o.pass = false;
      o.detail = why + "; ";
    }
  }
  o.detail += std::to_string(passed) + "/" + std::to_string(kConservationWorkloads) + " workloads of " +
              std::to_string(kConservationTxs) + " txs conserved supply after every block (" + fmt(seconds_since(t0)) +
              " s)";
  return o;
}

// ---------------------------------------------------------------------------
// Tamper detection through the CLI verify command.

Chain twenty_block_chain() {
  test::Fixture f(4);
  std::vector<Hash32> events;
  events.push_back(f.create_event(0, Amount::tokens(5), 6'000));
  events.push_back(f.create_event(1, Amount::tokens(50), 9'000));
  while (f.chain.height() < kTamperBlocks) {
    auto h = f.chain.height();
    if (h % 5 == 4) {
      f.advance(3'000);
      events.push_back(f.create_event(h % 4, Amount::tokens(3 + h), 7'000));
      continue;
    }
    const auto* e = f.chain.state().find_event(events[h % events.size()]);
    if (e->status == EventStatus::Active && f.chain.tip().timestamp.plus_ms(1'000) < e->deadline) {
      f.donate((h + 1) % 4, e->event_id, Amount::tokens(1 + h % 3));
    } else {
      f.advance(1'000);
    }
  }
  return f.chain;
}

Outcome tamper_detection() {
  Outcome o;
  test::TempDir dir;
  auto data = dir / "data";
  auto chain = twenty_block_chain();
  save_chain(chain, data / "chain");
  const auto file = chain_file(data / "chain");
  const auto pristine = test::slurp(file);
  std::vector<std::uint64_t> height_at(pristine.size());
  std::uint64_t h = 0;
  for (std::size_t i = 0; i < pristine.size(); ++i) {
    height_at[i] = h;
    if (pristine[i] == '\n') ++h;
  }
  std::mt19937_64 rng(20240601);
  int caught = 0;
  std::string data_arg = data.string();
  for (int t = 0; t < kTamperTrials; ++t) {
    auto pos = rng() % pristine.size();
    auto mutated = pristine;
    mutated[pos] = static_cast<char>(mutated[pos] ^ static_cast<char>(1 + rng() % 255));
    test::spit(file, mutated);
    const char* argv[] = {"dnb", "--data-dir", data_arg.c_str(), "verify"};
    std::ostringstream out, err;
    int code = cli::run(4, argv, out, err);
    bool ok = false;
    if (code == cli::kExitDomainError) {
      auto j = ojson::parse(out.str());
      ok = !j["ok"].get<bool>() && j["height"].get<std::uint64_t>() == height_at[pos];
    }
    if (ok) {
      ++caught;
    } else if (o.pass) {
      o.pass = false;
      o.detail = "missed byte " + std::to_string(pos) + " (height " + std::to_string(height_at[pos]) + "); ";
    }
  }
  test::spit(file, pristine);
  o.detail += std::to_string(caught) + "/" + std::to_string(kTamperTrials) +
              " single-byte mutations caught at the right height (" + std::to_string(chain.height() + 1) +
              " blocks on disk)";
  return o;
}

// ---------------------------------------------------------------------------
// Exhaustive operation sequences against a reference interpreter.

struct Template {
  Amount target;
  std::uint64_t duration_ms;
};
constexpr Template kTemplates[2] = {{Amount(5), 3'000}, {Amount(9), 60'000}};
constexpr Amount kDonation[2] = {Amount(3), Amount(4)};
constexpr std::uint64_t kStepMs = 1'000;
constexpr Amount kFee(1);
constexpr Amount kStart(1'000);

enum class OpKind { Create, Donate, Finalize };
struct Op {
  OpKind kind;
  int wallet;  // Create, Donate
  int arg;     // template for Create, event index otherwise
};

std::vector<Op> alphabet() {
  std::vector<Op> ops;
  for (int w = 0; w < 2; ++w) {
    for (int t = 0; t < 2; ++t) ops.push_back({OpKind::Create, w, t});
  }
  for (int w = 0; w < 2; ++w) {
    for (int e = 0; e < 2; ++e) ops.push_back({OpKind::Donate, w, e});
  }
  for (int e = 0; e < 2; ++e) ops.push_back({OpKind::Finalize, -1, e});
  return ops;
}

// Plain restatement of the campaign rules over small integers.
struct Reference {
  struct Ev {
    int owner;
    std::uint64_t target, deadline, pool = 0, total = 0;
    std::vector<std::pair<int, std::uint64_t>> donors;  // first-donation order
    std::string status = "Active";
  };
  struct Rec {
    int event, donor;
    std::uint64_t amount, time;
  };
  std::uint64_t now = 0;
  std::uint64_t balance[2] = {1'000, 1'000};
  std::uint64_t sink = 0;
  std::vector<Ev> events;
  std::vector<Rec> records;

  void settle(std::uint64_t t) {
    for (auto& e : events) {
      if (e.status != "Active" || e.deadline > t) continue;
      if (e.total >= e.target) {
        balance[e.owner] += e.pool;
        e.pool = 0;
        e.status = "Succeeded";
      } else {
        for (auto& [d, v] : e.donors) balance[d] += v;
        e.pool = 0;
        e.status = "Refunded";
      }
    }
  }

  // Returns false when the op must be rejected without changing anything.
  bool apply(const Op& op) {
    switch (op.kind) {
      case OpKind::Create: {
        auto t = now + kStepMs;
        settle(t);
        now = t;
        balance[op.wallet] -= 1;
        sink += 1;
        const auto& tpl = kTemplates[op.arg];
        events.push_back(Ev{op.wallet, static_cast<std::uint64_t>(tpl.target.value()), t + tpl.duration_ms});
        return true;
      }
      case OpKind::Donate: {
        if (op.arg >= static_cast<int>(events.size())) return false;
        auto t = now + kStepMs;
        auto& e = events[op.arg];
        // The block would finalize due events first, so a donation at or after the deadline fails.
        if (e.status != "Active" || e.deadline <= t) return false;
        settle(t);
        now = t;
        auto amount = static_cast<std::uint64_t>(kDonation[op.wallet].value());
        balance[op.wallet] -= amount + 1;
        sink += 1;
        e.pool += amount;
        e.total += amount;
        bool found = false;
        for (auto& [d, v] : e.donors) {
          if (d == op.wallet) {
            v += amount;
            found = true;
          }
        }
        if (!found) e.donors.emplace_back(op.wallet, amount);
        records.push_back({op.arg, op.wallet, amount, t});
        return true;
      }
      case OpKind::Finalize: {
        if (op.arg >= static_cast<int>(events.size())) return false;
        auto& e = events[op.arg];
        if (e.status != "Active") return false;
        auto t = std::max(now + kStepMs, e.deadline);
        settle(t);
        now = t;
        return true;
      }
    }
    return false;
  }
};

struct Real {
  Wallet w[2] = {new_wallet("a", 7001), new_wallet("b", 7002)};
  std::uint64_t nonce[2] = {0, 0};
  Chain chain = make();
  std::vector<Hash32> ids;

  Chain make() {
    GenesisParams g;
    g.fee = kFee;
    g.allocations = {{w[0].address, kStart}, {w[1].address, kStart}};
    return Chain::create(g);
  }

  bool apply(const Op& op) {
    auto now = chain.tip().timestamp;
    try {
      switch (op.kind) {
        case OpKind::Create: {
          const auto& tpl = kTemplates[op.arg];
          auto t = now.plus_ms(kStepMs);
          auto tx = test::signed_by(w[op.wallet], nonce[op.wallet], kFee,
                                    test::event_payload(w[op.wallet], tpl.target, t.plus_ms(tpl.duration_ms)));
          std::vector<Transaction> v{tx};
          chain.extend(v, t);
          ++nonce[op.wallet];
          ids.push_back(tx.tx_hash);
          return true;
        }
        case OpKind::Donate: {
          Hash32 id = op.arg < static_cast<int>(ids.size()) ? ids[op.arg] : Hash32{};
          auto tx = test::signed_by(w[op.wallet], nonce[op.wallet], kFee, DonatePayload{id, kDonation[op.wallet]});
          std::vector<Transaction> v{tx};
          chain.extend(v, now.plus_ms(kStepMs));
          ++nonce[op.wallet];
          return true;
        }
        case OpKind::Finalize: {
          if (op.arg >= static_cast<int>(ids.size())) {
            throw Error(errc::UnknownEvent);
          }
          const auto* e = chain.state().find_event(ids[op.arg]);
          auto t = std::max(now.plus_ms(kStepMs), e->deadline);
          // The contract decides whether finalization is allowed at t.
          auto scratch = chain.state();
          (void)contracts::finalize_event(scratch, ids[op.arg], t);
          chain.extend({}, t);
          return true;
        }
      }
    } catch (const Error&) {
      return false;
    }
    return false;
  }
};

std::string compare(const Reference& ref, const Real& real) {
  const auto& s = real.chain.state();
  for (int i = 0; i < 2; ++i) {
    if (s.balance_of(real.w[i].address).value() != ref.balance[i]) return "balance " + std::to_string(i);
  }
  if (s.balance_of(kFeeSink).value() != ref.sink) return "fee sink";
  if (s.events.size() != ref.events.size()) return "event count";
  for (std::size_t i = 0; i < ref.events.size(); ++i) {
    const auto& a = s.events[i];
    const auto& b = ref.events[i];
    if (std::string(to_string(a.status)) != b.status) return "status of event " + std::to_string(i);
    if (a.pool.value() != b.pool || a.total_donated.value() != b.total) return "pool of event " + std::to_string(i);
    auto donors = contracts::get_donors(s, a.event_id);
    if (donors.size() != b.donors.size()) return "donor count of event " + std::to_string(i);
    for (std::size_t k = 0; k < donors.size(); ++k) {
      if (donors[k].first != real.w[b.donors[k].first].address || donors[k].second.value() != b.donors[k].second) {
        return "donor totals of event " + std::to_string(i);
      }
    }
  }
  const auto& recs = s.tracking.records();
  if (recs.size() != ref.records.size()) return "record count";
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = ref.records[i];
    if (recs[i].event_id != real.ids[r.event] || recs[i].donor != real.w[r.donor].address ||
        recs[i].amount.value() != r.amount || recs[i].timestamp.ms != r.time) {
      return "record " + std::to_string(i);
    }
  }
  return {};
}

Outcome contract_oracle() {
  Outcome o;
  auto ops = alphabet();
  std::size_t sequences = 0, steps = 0;
  std::vector<std::size_t> idx;
  std::function<void(std::size_t)> enumerate = [&](std::size_t len) {
    if (idx.size() == len) {
      ++sequences;
      Reference ref;
      Real real;
      for (std::size_t i = 0; i < idx.size() && o.pass; ++i) {
        bool a = ref.apply(ops[idx[i]]);
        bool b = real.apply(ops[idx[i]]);
        ++steps;
        auto diff = a != b ? std::string("acceptance of op ") + std::to_string(i) : compare(ref, real);
        if (!diff.empty()) {
          o.pass = false;
          std::string seq;
          for (auto k : idx) seq += std::to_string(k) + " ";
          o.detail = "sequence [" + seq + "] diverges at step " + std::to_string(i) + ": " + diff + "; ";
        }
      }
      return;
    }
    for (std::size_t k = 0; k < ops.size() && o.pass; ++k) {
      idx.push_back(k);
      enumerate(len);
      idx.pop_back();
    }
  };
  for (std::size_t len = 1; len <= 4 && o.pass; ++len) enumerate(len);
  o.detail += std::to_string(sequences) + " sequences (" + std::to_string(steps) +
              " steps) over {create, donate, finalize} x 2 wallets x 2 templates matched the reference";
  return o;
}

// ---------------------------------------------------------------------------

Outcome determinism() {
  Outcome o;
  sim::SimConfig cfg;
  cfg.jitter_ms = 15'000;
  cfg.submission_interarrival_ms = 2'000;
  cfg.seed = 424242;
  std::vector<std::uint64_t> ns{5, 25, 50};
  bool metrics_equal = true, tips_equal = true;
  for (auto w : {sim::Workload::donate_storm, sim::Workload::mixed}) {
    for (auto n : ns) {
      auto a = sim::run_simulation(cfg, n, w);
      auto b = sim::run_simulation(cfg, n, w);
      metrics_equal = metrics_equal && a.metrics == b.metrics;
      tips_equal = tips_equal && a.chain->tip().block_hash == b.chain->tip().block_hash;
    }
  }
  bool csv_equal = sim::to_csv(sim::sweep(cfg, ns)) == sim::to_csv(sim::sweep(cfg, ns));

  test::TempDir dir;
  auto run = sim::run_simulation(cfg, 50, sim::Workload::mixed);
  save_chain(*run.chain, dir.path());
  auto s1 = load_chain(dir.path()).state().snapshot();
  auto s2 = load_chain(dir.path()).state().snapshot();
  bool replay_equal = s1 == s2 && s1 == run.chain->state().snapshot();

  o.pass = metrics_equal && tips_equal && csv_equal && replay_equal;
  o.detail = std::string("metrics ") + (metrics_equal ? "identical" : "DIFFER") + ", tip hashes " +
             (tips_equal ? "identical" : "DIFFER") + ", CSV " + (csv_equal ? "identical" : "DIFFERS") +
             ", replayed snapshot " + (replay_equal ? "identical" : "DIFFERS");
  return o;
}

Outcome crypto_round_trips() {
  Outcome o;
  std::mt19937_64 rng(1337);
  int verified = 0, rejected = 0, blobs = 0;
  for (int i = 0; i < kCryptoTrials; ++i) {
    auto keys = KeyPair::generate(static_cast<std::uint64_t>(i));
    Bytes msg(1 + rng() % 256);
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
    auto sig = crypto::sign(keys.secret, msg);
    if (crypto::verify(keys.public_key, msg, sig)) ++verified;

    // One bit flipped in the message, the signature or the key.
    auto m2 = msg;
    auto s2 = sig;
    auto k2 = keys.public_key;
    switch (rng() % 3) {
      case 0:
        m2[rng() % m2.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
        break;
      case 1:
        s2[rng() % s2.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
        break;
      default:
        k2.bytes[1 + rng() % 32] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
    }
    if (!crypto::verify(k2, m2, s2)) ++rejected;
  }
  test::TempDir dir;
  ContentStore store(dir.path());
  for (int i = 0; i < kCryptoTrials; ++i) {
    Bytes blob(rng() % 2048);
    for (auto& b : blob) b = static_cast<std::uint8_t>(rng());
    auto cid = store.put(blob);
    if (store.get(cid) == blob && cid.digest == crypto::sha256(blob) && Cid::parse(cid.text()) == cid) ++blobs;
  }
  // SHA-256 of the empty input, computed independently.
  bool empty_ok = store.put({}).digest.hex() == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855";
  o.pass = verified == kCryptoTrials && rejected == kCryptoTrials && blobs == kCryptoTrials && empty_ok;
  o.detail = std::to_string(verified) + "/" + std::to_string(kCryptoTrials) + " signatures verified, " +
             std::to_string(rejected) + "/" + std::to_string(kCryptoTrials) + " bit flips rejected, " +
             std::to_string(blobs) + "/" + std::to_string(kCryptoTrials) + " blobs round-tripped, empty digest " +
             (empty_ok ? "ok" : "WRONG");
  return o;
}

Outcome workflow() {
  Outcome o;
  test::TempDir dir;
  auto data = (dir / "data").string();
  auto image = (dir / "poster.jpg").string();
  test::spit(image, "jpeg bytes of the campaign poster");
  std::string last_out, failure;
  auto run = [&](std::vector<std::string> args) {
    std::vector<std::string> full{"dnb", "--data-dir", data};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    last_out = out.str();
    if (code != 0 && failure.empty()) failure = args[0] + ": " + err.str();
    return code;
  };

  auto t0 = Clock::now();
  run({"wallet", "new", "shelter", "--seed", "11"});
  for (auto d : {"ana", "ben", "chi"}) run({"wallet", "new", d, "--seed", std::to_string(d[0])});
  run({"init", "--alloc", "shelter=10tok", "--alloc", "ana=50tok", "--alloc", "ben=50tok", "--alloc", "chi=50tok"});
  run({"event", "create", "--wallet", "shelter", "--title", "Winter shelter", "--description", "Beds and blankets",
       "--target", "12tok", "--deadline", "+600", "--image", image});
  std::string event = failure.empty() ? ojson::parse(last_out)["event_id"].get<std::string>() : "";
  run({"donate", "--wallet", "ana", "--event", event, "--amount", "5tok"});
  run({"donate", "--wallet", "ben", "--event", event, "--amount", "4tok"});
  run({"donate", "--wallet", "chi", "--event", event, "--amount", "6tok"});
  run({"advance", "+600"});
  run({"event", "show", event});
  std::string status = failure.empty() ? ojson::parse(last_out)["status"].get<std::string>() : "";
  run({"wallet", "info", "shelter"});
  std::string balance = failure.empty() ? ojson::parse(last_out)["balance"].get<std::string>() : "";
  int verify_code = run({"verify"});
  double wall = seconds_since(t0);

  auto expected = (Amount::tokens(10) - kDefaultFee + Amount::tokens(15)).to_string();
  o.pass = failure.empty() && status == "Succeeded" && balance == expected && verify_code == 0 &&
           wall < kWorkflowWallSeconds;
  o.detail = failure.empty() ? "status " + status + ", organizer balance " + balance + " (expected " + expected +
                                   "), verify " + (verify_code == 0 ? "ok" : "FAILED") + ", " + fmt(wall * 1000) +
                                   " ms"
                             : "command failed: " + failure;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  std::vector<Criterion> criteria{
      {1, "latency endpoint fit",
       [] { return endpoint_fit("mean_latency_s", kLatencyTargetN5, kLatencyTargetN50, kLatencyTolerance, true); }},
      {2, "TPM endpoint fit",
       [] { return endpoint_fit("tpm_peak", kTpmTargetN5, kTpmTargetN50, kTpmTolerance, false); }},
      {3, "conservation", conservation},
      {4, "tamper detection", tamper_detection},
      {5, "contract oracle equivalence", contract_oracle},
      {6, "determinism", determinism},
      {7, "cryptographic round trips", crypto_round_trips},
      {8, "end-to-end workflow", workflow},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.name << ": " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
