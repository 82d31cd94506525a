#include "dnb/ledger.hpp"

#include <set>

#include "dnb/contracts.hpp"

namespace dnb {

Hash32 merkle_root(std::span<const Hash32> leaves) {
  if (leaves.empty()) return Hash32{};
  std::vector<Hash32> level(leaves.begin(), leaves.end());
  while (level.size() > 1) {
    if (level.size() % 2 == 1) level.push_back(level.back());
    std::vector<Hash32> next;
    next.reserve(level.size() / 2);
    for (std::size_t i = 0; i < level.size(); i += 2) {
      next.push_back(crypto::Sha256().update(level[i].view()).update(level[i + 1].view()).finish());
    }
    level = std::move(next);
  }
  return level.front();
}

Hash32 merkle_root_of(std::span<const Transaction> txs) {
  std::vector<Hash32> leaves;
  leaves.reserve(txs.size());
  for (const auto& tx : txs) leaves.push_back(tx.tx_hash);
  return merkle_root(leaves);
}

Bytes header_preimage(const Block& block) {
  Writer w;
  w.u64(block.height);
  w.fixed(block.prev_hash);
  w.fixed(block.merkle_root);
  w.u64(block.timestamp.ms);
  if (block.genesis) {
    const auto& g = *block.genesis;
    w.text(g.scheme);
    w.u128(g.fee.value());
    w.u32(static_cast<std::uint32_t>(g.allocations.size()));
    for (const auto& [addr, amount] : g.allocations) {
      w.fixed(addr);
      w.u128(amount.value());
    }
  }
  return std::move(w).take();
}

Hash32 compute_block_hash(const Block& block) { return crypto::sha256(header_preimage(block)); }

namespace {

// Everything after the signature check.
void apply_authenticated(WorldState& state, Amount fee, const Transaction& tx, Timestamp block_time) {
  if (tx.is_system()) throw Error(errc::UnauthorizedRefund, "refunds are emitted by the chain");
  auto sender = address_of(tx.sender_pk);
  auto expected_nonce = state.nonce_of(sender);
  if (tx.nonce != expected_nonce) {
    throw Error(errc::BadNonce,
                "expected " + std::to_string(expected_nonce) + ", got " + std::to_string(tx.nonce));
  }
  if (tx.fee != fee) throw Error(errc::BadFee, "fee must be " + fee.to_string());

  Amount required = tx.fee;
  if (const auto* donate = std::get_if<DonatePayload>(&tx.payload)) required = required + donate->amount;
  if (state.balance_of(sender) < required) {
    throw Error(errc::InsufficientBalance,
                sender.hex() + " has " + state.balance_of(sender).to_string() + ", needs " + required.to_string());
  }

  switch (tx.kind()) {
    case TxKind::CreateEvent:
      contracts::create_donation_event(state, tx, block_time);
      break;
    case TxKind::Donate:
      contracts::donate_to_event(state, tx, block_time);
      break;
    case TxKind::Refund:
      break;  // rejected above
  }
  state.debit(sender, tx.fee);
  state.credit(kFeeSink, tx.fee);
  state.nonces[sender] = expected_nonce + 1;
}

}  // namespace

void apply_transaction_in_place(WorldState& state, Amount fee, const Transaction& tx, Timestamp block_time) {
  if (tx.is_system()) throw Error(errc::UnauthorizedRefund, "refunds are emitted by the chain");
  if (compute_tx_hash(tx) != tx.tx_hash) throw Error(errc::TxHashMismatch, tx.tx_hash.hex());
  if (!verify_transaction(tx)) throw Error(errc::BadSignature, tx.tx_hash.hex());
  apply_authenticated(state, fee, tx, block_time);
}

WorldState apply_transaction(const WorldState& state, Amount fee, const Transaction& tx, Timestamp block_time) {
  WorldState next = state;
  apply_transaction_in_place(next, fee, tx, block_time);
  return next;
}

namespace {

// Finalizes every event due at `t` and applies the resulting refunds.
std::vector<Transaction> open_block(WorldState& state, Timestamp t) {
  std::vector<Transaction> emitted;
  for (const auto& id : contracts::due_events(state, t)) {
    for (auto& refund : contracts::finalize_event(state, id, t)) {
      contracts::apply_refund(state, refund);
      emitted.push_back(std::move(refund));
    }
  }
  return emitted;
}

WorldState genesis_state(const Block& genesis) {
  if (genesis.height != 0) throw Error(errc::HeightMismatch, "first block must have height 0");
  if (!genesis.prev_hash.is_zero()) throw Error(errc::PrevHashMismatch, "genesis prev_hash must be zero");
  if (!genesis.genesis) throw Error(errc::GenesisInvalid, "missing genesis parameters");
  if (!genesis.transactions.empty()) throw Error(errc::GenesisInvalid, "genesis carries no transactions");
  if (compute_block_hash(genesis) != genesis.block_hash) throw Error(errc::BlockHashMismatch);
  if (!genesis.merkle_root.is_zero()) throw Error(errc::MerkleMismatch);
  const auto& params = *genesis.genesis;
  if (params.scheme != crypto::kSchemeId) throw Error(errc::UnsupportedScheme, params.scheme);

  WorldState state;
  std::set<Address> seen;
  for (const auto& [addr, amount] : params.allocations) {
    if (!seen.insert(addr).second) throw Error(errc::GenesisInvalid, "duplicate allocation " + addr.hex());
    state.credit(addr, amount);
  }
  return state;
}

// Validates `block` as the successor of `prev` and returns the new state.
WorldState replay_block(const Block& prev, const WorldState& state, Amount fee, const Block& block) {
  if (block.prev_hash != prev.block_hash) throw Error(errc::PrevHashMismatch);
  if (block.height != prev.height + 1) {
    throw Error(errc::HeightMismatch, "expected " + std::to_string(prev.height + 1) + ", got " +
                                          std::to_string(block.height));
  }
  if (block.genesis) throw Error(errc::GenesisInvalid, "genesis parameters above height 0");
  if (compute_block_hash(block) != block.block_hash) throw Error(errc::BlockHashMismatch);
  if (merkle_root_of(block.transactions) != block.merkle_root) throw Error(errc::MerkleMismatch);
  if (block.timestamp < prev.timestamp) throw Error(errc::NonMonotoneTimestamp);
  for (const auto& tx : block.transactions) {
    if (compute_tx_hash(tx) != tx.tx_hash) throw Error(errc::TxHashMismatch, tx.tx_hash.hex());
    if (!verify_transaction(tx)) throw Error(errc::BadSignature, tx.tx_hash.hex());
  }

  WorldState next = state;
  auto expected = open_block(next, block.timestamp);
  if (block.transactions.size() < expected.size()) throw Error(errc::RefundMismatch, "missing refunds");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (block.transactions[i] != expected[i]) {
      throw Error(errc::RefundMismatch, "refund " + std::to_string(i) + " differs from schedule");
    }
  }
  for (std::size_t i = expected.size(); i < block.transactions.size(); ++i) {
    apply_authenticated(next, fee, block.transactions[i], block.timestamp);
  }
  return next;
}

}  // namespace

Chain Chain::create(GenesisParams params, Timestamp genesis_time) {
  Block genesis;
  genesis.timestamp = genesis_time;
  genesis.genesis = std::move(params);
  genesis.block_hash = compute_block_hash(genesis);

  Chain chain;
  chain.state_ = genesis_state(genesis);
  chain.blocks_.push_back(std::move(genesis));
  return chain;
}

Chain Chain::from_blocks(std::vector<Block> blocks) {
  if (blocks.empty()) throw Error(errc::EmptyStore, "no blocks");
  Chain chain;
  std::uint64_t height = 0;
  try {
    chain.state_ = genesis_state(blocks.front());
    for (height = 1; height < blocks.size(); ++height) {
      chain.state_ = replay_block(blocks[height - 1], chain.state_, blocks.front().genesis->fee, blocks[height]);
    }
  } catch (const Error& e) {
    throw Error(errc::CorruptChain, "height " + std::to_string(height) + ": " + e.what(), e.root_kind(), height);
  }
  chain.blocks_ = std::move(blocks);
  return chain;
}

std::pair<Block, WorldState> Chain::build(std::span<const Transaction> pending, Timestamp timestamp) const {
  if (timestamp < tip().timestamp) {
    throw Error(errc::NonMonotoneTimestamp,
                std::to_string(timestamp.ms) + " < tip " + std::to_string(tip().timestamp.ms));
  }
  WorldState scratch = state_;
  Block block;
  block.height = tip().height + 1;
  block.prev_hash = tip().block_hash;
  block.timestamp = timestamp;
  block.transactions = open_block(scratch, timestamp);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    try {
      apply_transaction_in_place(scratch, fee(), pending[i], timestamp);
    } catch (const Error& e) {
      throw Error(errc::InvalidTransaction, "index " + std::to_string(i) + ": " + e.what(), e.root_kind(), i);
    }
    block.transactions.push_back(pending[i]);
  }
  block.merkle_root = merkle_root_of(block.transactions);
  block.block_hash = compute_block_hash(block);
  return {std::move(block), std::move(scratch)};
}

Block Chain::build_block(std::span<const Transaction> pending, Timestamp timestamp) const {
  return build(pending, timestamp).first;
}

void Chain::append(const Block& block) {
  state_ = replay_block(tip(), state_, fee(), block);
  blocks_.push_back(block);
}

const Block& Chain::extend(std::span<const Transaction> pending, Timestamp timestamp) {
  auto [block, next] = build(pending, timestamp);
  state_ = std::move(next);
  blocks_.push_back(std::move(block));
  return blocks_.back();
}

Block build_block(const Chain& chain, std::span<const Transaction> pending, Timestamp timestamp) {
  return chain.build_block(pending, timestamp);
}

ValidationReport validate_blocks(std::span<const Block> blocks) {
  if (blocks.empty()) return ValidationReport::failure(0, errc::EmptyStore, "no blocks");
  WorldState state;
  try {
    state = genesis_state(blocks.front());
  } catch (const Error& e) {
    return ValidationReport::failure(0, e.kind(), e.detail());
  }
  const Amount fee = blocks.front().genesis->fee;
  for (std::size_t h = 1; h < blocks.size(); ++h) {
    try {
      state = replay_block(blocks[h - 1], state, fee, blocks[h]);
    } catch (const Error& e) {
      return ValidationReport::failure(h, e.kind(), e.detail());
    }
  }
  return {};
}

ValidationReport validate_chain(const Chain& chain) { return validate_blocks(chain.blocks()); }

}  // namespace dnb
