#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "dnb/chain_io.hpp"
#include "dnb/contracts.hpp"
#include "dnb/identity.hpp"
#include "dnb/ledger.hpp"

namespace dnb::test {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("dnb-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

inline Cid sample_image() { return Cid::of(as_bytes("png-bytes")); }

inline Transaction signed_by(const Wallet& w, std::uint64_t nonce, Amount fee, Payload payload) {
  Transaction tx;
  tx.sender_pk = w.keys.public_key;
  tx.nonce = nonce;
  tx.fee = fee;
  tx.payload = std::move(payload);
  return sign_transaction(std::move(tx), w.keys.secret);
}

inline CreateEventPayload event_payload(const Wallet& owner, Amount target, Timestamp deadline,
                                        std::string title = "Flood relief") {
  CreateEventPayload p;
  p.owner = owner.address;
  p.owner_name = owner.name;
  p.title = std::move(title);
  p.description = "help";
  p.target = target;
  p.deadline = deadline;
  p.image = sample_image();
  return p;
}

/// Small chain with funded wallets and a nonce tracker, for ledger tests.
struct Fixture {
  std::vector<Wallet> wallets;
  Chain chain;
  std::map<Address, std::uint64_t> nonces;

  explicit Fixture(std::size_t n_wallets = 3, Amount each = Amount::tokens(100), Amount fee = kDefaultFee)
      : wallets(make_wallets(n_wallets)), chain(make_chain(wallets, each, fee)) {}

  Transaction tx(std::size_t who, Payload payload) {
    const auto& w = wallets.at(who);
    return signed_by(w, nonces[w.address]++, chain.fee(), std::move(payload));
  }

  // Appends one block one second after the tip; returns the tx hash.
  Hash32 commit(const Transaction& t, std::uint64_t step_ms = 1000) {
    std::vector<Transaction> v{t};
    chain.extend(v, chain.tip().timestamp.plus_ms(step_ms));
    return t.tx_hash;
  }

  Hash32 create_event(std::size_t owner, Amount target, std::uint64_t deadline_in_ms) {
    return commit(tx(owner, event_payload(wallets.at(owner), target, chain.tip().timestamp.plus_ms(deadline_in_ms))));
  }

  void donate(std::size_t who, const Hash32& event, Amount amount) { commit(tx(who, DonatePayload{event, amount})); }

  void advance(std::uint64_t ms) { chain.extend({}, chain.tip().timestamp.plus_ms(ms)); }

 private:
  static std::vector<Wallet> make_wallets(std::size_t n) {
    std::vector<Wallet> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(new_wallet("w" + std::to_string(i), 1000 + i));
    return out;
  }
  static Chain make_chain(const std::vector<Wallet>& wallets, Amount each, Amount fee) {
    GenesisParams g;
    g.fee = fee;
    for (const auto& w : wallets) g.allocations.emplace_back(w.address, each);
    return Chain::create(std::move(g));
  }
};

}  // namespace dnb::test
