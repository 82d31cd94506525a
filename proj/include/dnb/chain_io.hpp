#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dnb/ledger.hpp"

namespace dnb {

using ojson = nlohmann::ordered_json;

inline constexpr std::string_view kChainFileName = "blocks.jsonl";

ojson to_json(const Transaction& tx);
Transaction transaction_from_json(const ojson& j);

ojson to_json(const Block& block);
Block block_from_json(const ojson& j);

/// One chain-file line (no trailing newline).
std::string encode_record(const Block& block);
/// Parses one line and rejects anything that does not re-encode to the
/// exact same bytes.
Block decode_record(std::string_view line);

struct ChainFileScan {
  std::vector<Block> blocks;              // records parsed before the first failure
  std::optional<ValidationReport> failure;  // parse failure, if any
};

std::filesystem::path chain_file(const std::filesystem::path& dir);

/// Writes the whole chain atomically (temp file + rename).
void save_chain(const Chain& chain, const std::filesystem::path& dir);

/// Parses, re-validates and replays. Throws EmptyStore, IoError or
/// CorruptChain(height, cause).
Chain load_chain(const std::filesystem::path& dir);

ChainFileScan scan_chain_file(const std::filesystem::path& dir);

/// Full check of a stored chain: record syntax plus validate_blocks.
ValidationReport verify_chain_store(const std::filesystem::path& dir);

}  // namespace dnb
