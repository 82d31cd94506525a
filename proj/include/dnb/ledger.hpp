#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnb/state.hpp"
#include "dnb/transaction.hpp"

namespace dnb {

inline constexpr Amount kDefaultFee{1000};

/// Chain-wide parameters fixed at height 0.
struct GenesisParams {
  std::string scheme{crypto::kSchemeId};
  Amount fee = kDefaultFee;
  std::vector<std::pair<Address, Amount>> allocations;

  friend bool operator==(const GenesisParams&, const GenesisParams&) = default;
};

struct Block {
  std::uint64_t height = 0;
  Hash32 prev_hash;
  Hash32 merkle_root;
  Timestamp timestamp;
  std::vector<Transaction> transactions;
  std::optional<GenesisParams> genesis;  // present on height 0 only
  Hash32 block_hash;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Empty -> zero hash; one leaf -> the leaf; otherwise pairwise
/// SHA-256(left || right), duplicating the last node of odd levels.
Hash32 merkle_root(std::span<const Hash32> leaves);
Hash32 merkle_root_of(std::span<const Transaction> txs);

// height || prev_hash || merkle_root || timestamp, plus the encoded
// genesis parameters on height 0.
Bytes header_preimage(const Block& block);
Hash32 compute_block_hash(const Block& block);

/// Applies one user transaction: signature, nonce, fee and balance checks,
/// then the contract dispatch. Refunds are rejected (UnauthorizedRefund);
/// only block application emits them.
void apply_transaction_in_place(WorldState& state, Amount fee, const Transaction& tx, Timestamp block_time);
WorldState apply_transaction(const WorldState& state, Amount fee, const Transaction& tx, Timestamp block_time);

struct ValidationReport {
  bool ok = true;
  std::uint64_t height = 0;
  errc kind = errc::CorruptChain;
  std::string detail;

  static ValidationReport failure(std::uint64_t height, errc kind, std::string detail) {
    return {false, height, kind, std::move(detail)};
  }
};

/// Validated blocks plus the state they derive. Every mutation goes
/// through full validation, so a Chain value is always consistent.
class Chain {
 public:
  static Chain create(GenesisParams params, Timestamp genesis_time = {});
  /// Replays and validates; throws CorruptChain(height, cause).
  static Chain from_blocks(std::vector<Block> blocks);

  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& tip() const { return blocks_.back(); }
  std::uint64_t height() const { return tip().height; }
  const WorldState& state() const { return state_; }
  const GenesisParams& genesis() const { return *blocks_.front().genesis; }
  Amount fee() const { return genesis().fee; }

  /// Builds (without appending) the next block from `pending`. Refunds
  /// owed by events reaching their deadline at `timestamp` are emitted
  /// ahead of the pending transactions.
  /// Throws InvalidTransaction(index, cause) or NonMonotoneTimestamp.
  Block build_block(std::span<const Transaction> pending, Timestamp timestamp) const;

  /// Validates `block` against the tip and appends it.
  void append(const Block& block);

  /// build_block + append, sharing one replay.
  const Block& extend(std::span<const Transaction> pending, Timestamp timestamp);

 private:
  Chain() = default;
  std::pair<Block, WorldState> build(std::span<const Transaction> pending, Timestamp timestamp) const;

  std::vector<Block> blocks_;
  WorldState state_;
};

Block build_block(const Chain& chain, std::span<const Transaction> pending, Timestamp timestamp);

/// Checks hash links, heights, block hashes, Merkle roots, signatures,
/// nonces and replayed state. Reports the first failing height.
ValidationReport validate_blocks(std::span<const Block> blocks);
ValidationReport validate_chain(const Chain& chain);

}  // namespace dnb
