#include "dnb/cli.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <vector>

#include "CLI11.hpp"

#include "dnb/chain_io.hpp"
#include "dnb/contracts.hpp"
#include "dnb/identity.hpp"

namespace fs = std::filesystem;

namespace dnb::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr std::string_view kCliKeys[] = {"data_dir", "network_name", "fee", "max_blob"};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::IoError, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(errc::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(errc::IoError, "short write to " + path.string());
}

/// Exclusive advisory lock on `<data_dir>/LOCK` for mutating commands.
class DataDirLock {
 public:
  explicit DataDirLock(const fs::path& data_dir) {
    std::error_code ec;
    fs::create_directories(data_dir, ec);
    auto path = data_dir / "LOCK";
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
    if (fd_ < 0) throw Error(errc::IoError, "cannot open " + path.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      throw Error(errc::Locked, "another dnb process holds " + path.string());
    }
  }
  ~DataDirLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  DataDirLock(const DataDirLock&) = delete;
  DataDirLock& operator=(const DataDirLock&) = delete;

 private:
  int fd_ = -1;
};

Amount parse_amount_arg(const std::string& text) {
  // "<units>" or "<whole tokens>tok"
  if (text.ends_with("tok")) {
    auto whole = Amount::parse(std::string_view(text).substr(0, text.size() - 3));
    auto units = whole.value() * Amount::kUnitsPerToken;
    if (whole.value() != 0 && units / whole.value() != Amount::kUnitsPerToken) throw Error(errc::AmountOverflow, text);
    return Amount(units);
  }
  return Amount::parse(text);
}

std::uint64_t parse_relative_seconds(const std::string& text) {
  if (text.size() < 2 || text.front() != '+' ||
      !std::all_of(text.begin() + 1, text.end(), [](char c) { return c >= '0' && c <= '9'; }) || text.size() > 15) {
    throw UsageError("deadline must be +<seconds> relative to the chain tip, got '" + text + "'");
  }
  return std::stoull(text.substr(1));
}

ojson event_json(const DonationEventState& e) {
  ojson j;
  j["event_id"] = e.event_id.hex();
  j["owner"] = e.owner.hex();
  j["owner_name"] = e.owner_name;
  j["title"] = e.title;
  j["description"] = e.description;
  j["target"] = e.target.to_string();
  j["deadline"] = e.deadline.ms;
  j["image"] = e.image.text();
  j["pool"] = e.pool.to_string();
  j["total_donated"] = e.total_donated.to_string();
  ojson donors = ojson::array();
  for (const auto& d : e.donors) donors.push_back(d.hex());
  j["donors"] = std::move(donors);
  j["status"] = std::string(to_string(e.status));
  return j;
}

ojson record_json(const DonationRecord& r) {
  ojson j;
  j["event_id"] = r.event_id.hex();
  j["donor"] = r.donor.hex();
  j["amount"] = r.amount.to_string();
  j["timestamp"] = r.timestamp.ms;
  j["tx_hash"] = r.tx_hash.hex();
  return j;
}

ojson metrics_json(const sim::SimMetrics& m) {
  ojson j;
  j["n_txs"] = m.n_txs;
  j["mean_latency_s"] = m.mean_latency_s;
  j["p95_latency_s"] = m.p95_latency_s;
  j["makespan_s"] = m.makespan_s;
  j["tpm_avg"] = m.tpm_avg;
  j["tpm_peak"] = m.tpm_peak;
  j["seed"] = m.seed;
  j["per_tx_latency_s"] = m.per_tx_latency_s;
  return j;
}

Hash32 parse_event_id(const std::string& text) {
  try {
    return Hash32::from_hex(text);
  } catch (const Error&) {
    throw UsageError("event id must be 64 lowercase hex characters");
  }
}

class Session {
 public:
  Session(CliConfig config, std::ostream& out, bool json) : config_(std::move(config)), out_(out), json_(json) {}

  const CliConfig& config() const { return config_; }

  fs::path wallet_path(const std::string& name) const { return config_.wallets_dir() / (name + ".json"); }

  Wallet wallet(const std::string& name) const {
    auto path = wallet_path(name);
    if (!fs::exists(path)) throw Error(errc::UnknownWallet, name);
    return load_wallet(path);
  }

  Chain chain() const {
    if (!fs::exists(chain_file(config_.chain_dir()))) {
      throw Error(errc::NotInitialized, "no chain in " + config_.data_dir.string() + "; run `dnb init`");
    }
    return load_chain(config_.chain_dir());
  }

  Address resolve_address(const std::string& who) const {
    if (who.size() == 2 * Address::size && std::all_of(who.begin(), who.end(), [](char c) {
          return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
        })) {
      return Address::from_hex(who);
    }
    return wallet(who).address;
  }

  // Appends one block holding `txs` one step after the tip.
  const Block& commit(Chain& chain, std::vector<Transaction> txs, std::uint64_t step_ms = kActionStepMs) {
    const auto& block = chain.extend(txs, chain.tip().timestamp.plus_ms(step_ms));
    save_chain(chain, config_.chain_dir());
    return block;
  }

  // Details can quote corrupt input; never let that abort the report.
  void print(const ojson& j) { out_ << j.dump(2, ' ', false, ojson::error_handler_t::replace) << '\n'; }
  void print_line(const std::string& s) { out_ << s << '\n'; }
  bool json() const { return json_; }

 private:
  CliConfig config_;
  std::ostream& out_;
  bool json_;
};

Transaction signed_tx(const Chain& chain, const Wallet& w, Payload payload) {
  Transaction tx;
  tx.sender_pk = w.keys.public_key;
  tx.nonce = chain.state().nonce_of(w.address);
  tx.fee = chain.fee();
  tx.payload = std::move(payload);
  return sign_transaction(std::move(tx), w.keys.secret);
}

}  // namespace

CliConfig load_cli_config(const fs::path& path) {
  auto kv = sim::parse_key_values(read_file(path));
  CliConfig c;
  c.sim = sim::sim_config_from(kv, kCliKeys);
  for (const auto& [key, value] : kv) {
    if (key == "data_dir") {
      c.data_dir = value;
    } else if (key == "network_name") {
      c.network_name = value;
    } else if (key == "fee") {
      c.fee = Amount::parse(value);
    } else if (key == "max_blob") {
      try {
        c.max_blob = std::stoull(value);
      } catch (const std::exception&) {
        throw Error(errc::InvalidConfig, "max_blob must be an unsigned integer");
      }
    }
  }
  return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const Environment& env) {
  CLI::App app{"dnb - donation ledger, content store and network simulator", "dnb"};
  app.require_subcommand(1);

  std::string config_path;
  std::string data_dir_flag;
  bool json = false;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--data-dir", data_dir_flag, "data directory (falls back to DNB_DATA_DIR)");
  app.add_flag("--json", json, "machine-readable output for every command");

  // init
  auto* init = app.add_subcommand("init", "create the data directory and genesis block");
  std::vector<std::string> allocs;
  std::string init_fee;
  init->add_option("--alloc", allocs, "<wallet-name|address>=<amount>; unknown names create wallets");
  init->add_option("--fee", init_fee, "flat per-transaction fee in units");

  // wallet
  auto* wallet_cmd = app.add_subcommand("wallet", "manage local wallets");
  wallet_cmd->require_subcommand(1);
  auto* wallet_new = wallet_cmd->add_subcommand("new", "create a wallet");
  std::string wallet_name;
  std::optional<std::uint64_t> wallet_seed;
  wallet_new->add_option("name", wallet_name)->required();
  wallet_new->add_option("--seed", wallet_seed, "deterministic key generation");
  auto* wallet_info_cmd = wallet_cmd->add_subcommand("info", "address, balance and network");
  wallet_info_cmd->add_option("name", wallet_name)->required();
  auto* wallet_auth = wallet_cmd->add_subcommand("auth", "answer a DID challenge");
  std::string challenge_hex;
  wallet_auth->add_option("name", wallet_name)->required();
  wallet_auth->add_option("challenge", challenge_hex, "challenge bytes as hex")->required();

  // auth verify
  auto* auth = app.add_subcommand("auth", "verify a DID challenge response");
  std::string auth_did, auth_pk, auth_sig;
  auth->add_option("did", auth_did)->required();
  auth->add_option("challenge", challenge_hex)->required();
  auth->add_option("public_key", auth_pk)->required();
  auth->add_option("signature", auth_sig)->required();

  // event
  auto* event_cmd = app.add_subcommand("event", "create, show or share a donation event");
  event_cmd->require_subcommand(1);
  auto* event_create = event_cmd->add_subcommand("create", "upload the image and open a campaign");
  std::string ev_wallet, ev_title, ev_desc, ev_target, ev_deadline, ev_image, ev_owner_name;
  event_create->add_option("--wallet", ev_wallet)->required();
  event_create->add_option("--title", ev_title)->required();
  event_create->add_option("--description", ev_desc);
  event_create->add_option("--target", ev_target, "units, or <n>tok")->required();
  event_create->add_option("--deadline", ev_deadline, "+<seconds> after the chain tip")->required();
  event_create->add_option("--image", ev_image, "image file")->required();
  event_create->add_option("--owner-name", ev_owner_name, "defaults to the wallet name");
  auto* event_show = event_cmd->add_subcommand("show", "one event with per-donor totals");
  std::string event_id_arg;
  event_show->add_option("event_id", event_id_arg)->required();
  auto* event_share = event_cmd->add_subcommand("share", "deterministic share link");
  std::string platform;
  event_share->add_option("event_id", event_id_arg)->required();
  event_share->add_option("--platform", platform, "twitter|facebook|whatsapp|instagram")->required();

  auto* events_cmd = app.add_subcommand("events", "list all donation events");

  auto* donate = app.add_subcommand("donate", "donate to an event");
  std::string donate_wallet, donate_amount;
  donate->add_option("--wallet", donate_wallet)->required();
  donate->add_option("--event", event_id_arg)->required();
  donate->add_option("--amount", donate_amount, "units, or <n>tok")->required();

  auto* history = app.add_subcommand("history", "donation history of a wallet or address");
  std::string history_who;
  history->add_option("who", history_who, "wallet name or address hex")->required();

  auto* verify = app.add_subcommand("verify", "re-validate the stored chain");

  auto* advance = app.add_subcommand("advance", "append an empty block later in virtual time");
  std::string advance_by;
  advance->add_option("by", advance_by, "+<seconds>")->required();

  auto* simulate = app.add_subcommand("simulate", "run the network simulator once");
  std::uint64_t sim_n = 0;
  std::string workload_name = "donate_storm";
  std::string save_chain_dir;
  simulate->add_option("--n", sim_n)->required();
  simulate->add_option("--workload", workload_name, "donate_storm|mixed");
  simulate->add_option("--save-chain", save_chain_dir, "write the resulting chain here");

  auto* sweep_cmd = app.add_subcommand("sweep", "run the simulator over a range of sizes");
  std::uint64_t sweep_from = 5, sweep_to = 50, sweep_step = 5;
  std::string sweep_out;
  sweep_cmd->add_option("--from", sweep_from);
  sweep_cmd->add_option("--to", sweep_to);
  sweep_cmd->add_option("--step", sweep_step);
  sweep_cmd->add_option("--out", sweep_out, "CSV path (stdout when omitted)");
  sweep_cmd->add_option("--workload", workload_name);

  auto* calibrate_cmd = app.add_subcommand("calibrate", "fit the delay model to the reference endpoints");
  std::string calib_out, calib_report;
  calibrate_cmd->add_option("--out", calib_out, "write the config here");
  calibrate_cmd->add_option("--report", calib_report, "write the residual report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CliConfig config;
    if (!config_path.empty()) config = load_cli_config(config_path);
    if (!data_dir_flag.empty()) {
      config.data_dir = data_dir_flag;
    } else if (config.data_dir.empty()) {
      config.data_dir = env.data_dir.value_or("dnb-data");
    }
    if (!init_fee.empty()) config.fee = Amount::parse(init_fee);
    Session session(config, out, json);

    if (*init) {
      DataDirLock lock(config.data_dir);
      if (fs::exists(chain_file(config.chain_dir()))) {
        throw Error(errc::AlreadyInitialized, config.data_dir.string());
      }
      fs::create_directories(config.chain_dir());
      fs::create_directories(config.blobs_dir());
      fs::create_directories(config.wallets_dir());
      GenesisParams params;
      params.fee = config.fee;
      for (const auto& spec : allocs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--alloc expects <who>=<amount>, got '" + spec + "'");
        auto who = spec.substr(0, eq);
        auto amount = parse_amount_arg(spec.substr(eq + 1));
        Address addr;
        try {
          addr = session.resolve_address(who);
        } catch (const Error& e) {
          if (e.kind() != errc::UnknownWallet) throw;
          auto w = new_wallet(who, std::nullopt, config.network_name);
          save_wallet(w, session.wallet_path(who));
          addr = w.address;
        }
        params.allocations.emplace_back(addr, amount);
      }
      auto chain = Chain::create(std::move(params));
      save_chain(chain, config.chain_dir());
      ojson j;
      j["genesis_hash"] = chain.tip().block_hash.hex();
      j["fee"] = chain.fee().to_string();
      j["allocations"] = chain.genesis().allocations.size();
      session.print(j);
      return kExitOk;
    }

    if (*wallet_new) {
      DataDirLock lock(config.data_dir);
      auto path = session.wallet_path(wallet_name);
      if (fs::exists(path)) throw Error(errc::WalletExists, wallet_name);
      auto w = new_wallet(wallet_name, wallet_seed, config.network_name);
      save_wallet(w, path);
      ojson j;
      j["name"] = w.name;
      j["address"] = w.address.hex();
      j["did"] = w.did.text();
      j["network_name"] = w.network_name;
      session.print(j);
      return kExitOk;
    }

    if (*wallet_info_cmd) {
      auto w = session.wallet(wallet_name);
      auto info = wallet_info(w, session.chain());
      ojson j;
      j["address"] = info.address;
      j["balance"] = info.balance.to_string();
      j["network_name"] = info.network_name;
      session.print(j);
      return kExitOk;
    }

    if (*wallet_auth) {
      auto w = session.wallet(wallet_name);
      Bytes challenge;
      try {
        challenge = from_hex(challenge_hex);
      } catch (const Error&) {
        throw UsageError("challenge must be lowercase hex");
      }
      if (challenge.size() < kMinChallengeSize) throw Error(errc::InvalidChallenge, "need at least 16 bytes");
      auto response = respond_to_challenge(w.keys, challenge);
      ojson j;
      j["did"] = w.did.text();
      j["public_key"] = response.public_key.hex();
      j["signature"] = to_hex(response.signature);
      session.print(j);
      return kExitOk;
    }

    if (*auth) {
      AuthResponse response{PublicKey::from_hex(auth_pk), from_hex(auth_sig)};
      bool ok = authenticate(auth_did, from_hex(challenge_hex), response);
      ojson j;
      j["authenticated"] = ok;
      session.print(j);
      return ok ? kExitOk : kExitDomainError;
    }

    if (*event_create) {
      DataDirLock lock(config.data_dir);
      auto deadline_s = parse_relative_seconds(ev_deadline);
      auto target = parse_amount_arg(ev_target);
      auto chain = session.chain();
      auto w = session.wallet(ev_wallet);
      if (!fs::exists(ev_image)) throw Error(errc::NotFound, "image " + ev_image);
      auto image = read_file(ev_image);

      // Image first, then the transaction that references it.
      ContentStore store(config.blobs_dir(), config.max_blob);
      auto cid = store.put(as_bytes(image));

      CreateEventPayload p;
      p.owner = w.address;
      p.owner_name = ev_owner_name.empty() ? w.name : ev_owner_name;
      p.title = ev_title;
      p.description = ev_desc;
      p.target = target;
      p.deadline = chain.tip().timestamp.plus_ms(deadline_s * 1000);
      p.image = cid;
      auto tx = signed_tx(chain, w, std::move(p));
      const auto& block = session.commit(chain, {tx});
      ojson j;
      j["event_id"] = tx.tx_hash.hex();
      j["image"] = cid.text();
      j["block_height"] = block.height;
      session.print(j);
      return kExitOk;
    }

    if (*event_show) {
      auto id = parse_event_id(event_id_arg);
      auto chain = session.chain();
      const auto* e = chain.state().find_event(id);
      if (e == nullptr) throw Error(errc::UnknownEvent, event_id_arg);
      auto j = event_json(*e);
      ojson totals = ojson::array();
      for (const auto& [addr, amount] : contracts::get_donors(chain.state(), id)) {
        totals.push_back(ojson{{"address", addr.hex()}, {"amount", amount.to_string()}});
      }
      j["donor_totals"] = std::move(totals);
      session.print(j);
      return kExitOk;
    }

    if (*event_share) {
      auto id = parse_event_id(event_id_arg);
      auto chain = session.chain();
      const auto* e = chain.state().find_event(id);
      if (e == nullptr) throw Error(errc::UnknownEvent, event_id_arg);
      auto link = share_link(id, e->image, platform);
      if (json) {
        session.print(ojson{{"link", link}});
      } else {
        session.print_line(link);
      }
      return kExitOk;
    }

    if (*events_cmd) {
      auto chain = session.chain();
      ojson list = ojson::array();
      for (const auto& e : contracts::get_donation_events(chain.state())) list.push_back(event_json(e));
      session.print(list);
      return kExitOk;
    }

    if (*donate) {
      DataDirLock lock(config.data_dir);
      auto id = parse_event_id(event_id_arg);
      auto amount = parse_amount_arg(donate_amount);
      auto chain = session.chain();
      auto w = session.wallet(donate_wallet);
      auto tx = signed_tx(chain, w, DonatePayload{id, amount});
      const auto& block = session.commit(chain, {tx});
      ojson j;
      j["tx_hash"] = tx.tx_hash.hex();
      j["block_height"] = block.height;
      session.print(j);
      return kExitOk;
    }

    if (*history) {
      auto chain = session.chain();
      auto addr = session.resolve_address(history_who);
      ojson list = ojson::array();
      for (const auto& r : contracts::get_donation_history(chain.state(), addr)) list.push_back(record_json(r));
      session.print(list);
      return kExitOk;
    }

    if (*verify) {
      auto report = verify_chain_store(config.chain_dir());
      ojson j;
      j["ok"] = report.ok;
      if (!report.ok) {
        j["height"] = report.height;
        j["kind"] = std::string(to_string(report.kind));
        j["detail"] = report.detail;
        session.print(j);
        err << "error: " << to_string(report.kind) << ": height " << report.height
            << (report.detail.empty() ? "" : ": " + report.detail) << '\n';
        return kExitDomainError;
      }
      auto chain = load_chain(config.chain_dir());
      j["height"] = chain.height();
      j["tip_hash"] = chain.tip().block_hash.hex();
      j["state_hash"] = chain.state().snapshot_hash().hex();
      session.print(j);
      return kExitOk;
    }

    if (*advance) {
      DataDirLock lock(config.data_dir);
      auto chain = session.chain();
      auto seconds = parse_relative_seconds(advance_by);
      std::vector<Hash32> due;
      for (const auto& e : chain.state().events) {
        if (!e.is_final()) due.push_back(e.event_id);
      }
      const auto& block = session.commit(chain, {}, seconds * 1000);
      ojson finalized = ojson::array();
      for (const auto& id : due) {
        const auto* e = chain.state().find_event(id);
        if (e->is_final()) {
          finalized.push_back(ojson{{"event_id", id.hex()}, {"status", std::string(to_string(e->status))}});
        }
      }
      ojson j;
      j["block_height"] = block.height;
      j["timestamp"] = block.timestamp.ms;
      j["finalized"] = std::move(finalized);
      session.print(j);
      return kExitOk;
    }

    if (*simulate) {
      auto run = sim::run_simulation(config.sim, sim_n, sim::parse_workload(workload_name));
      auto j = metrics_json(run.metrics);
      j["workload"] = std::string(sim::to_string(sim::parse_workload(workload_name)));
      j["tip_hash"] = run.chain->tip().block_hash.hex();
      if (!save_chain_dir.empty()) save_chain(*run.chain, save_chain_dir);
      session.print(j);
      return kExitOk;
    }

    if (*sweep_cmd) {
      if (sweep_step == 0 || sweep_from > sweep_to) throw UsageError("sweep needs --from <= --to and --step > 0");
      std::vector<std::uint64_t> ns;
      for (auto n = sweep_from; n <= sweep_to; n += sweep_step) ns.push_back(n);
      auto rows = sim::sweep(config.sim, ns, sim::parse_workload(workload_name));
      auto csv = sim::to_csv(rows);
      if (sweep_out.empty()) {
        out << csv;
      } else {
        write_file(sweep_out, csv);
        if (json) session.print(ojson{{"rows", rows.size()}, {"out", sweep_out}});
      }
      return kExitOk;
    }

    if (*calibrate_cmd) {
      auto targets = sim::reference_targets();
      auto result = sim::calibrate(targets, sim::SearchSpace::defaults(), config.sim);
      auto cfg = "# fitted by `dnb calibrate` to the reference latency/TPM endpoints\n" +
                 sim::format_sim_config(result.config);
      if (!calib_out.empty()) write_file(calib_out, cfg);
      if (!calib_report.empty()) write_file(calib_report, result.report());
      if (calib_out.empty()) out << cfg;
      out << result.report();
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    auto kind = e.root_kind();
    err << "error: " << to_string(kind) << ": " << (e.detail().empty() ? std::string(e.what()) : e.detail()) << '\n';
    return kExitDomainError;
  } catch (const fs::filesystem_error& e) {
    err << "error: IoError: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace dnb::cli
