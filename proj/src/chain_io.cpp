#include "dnb/chain_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>

namespace fs = std::filesystem;

namespace dnb {

namespace {

const ojson& field(const ojson& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(errc::MalformedRecord, std::string("missing field ") + key);
  return j.at(key);
}

std::uint64_t get_u64(const ojson& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_unsigned()) throw Error(errc::MalformedRecord, std::string(key) + " must be unsigned");
  return v.get<std::uint64_t>();
}

std::string get_string(const ojson& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) throw Error(errc::MalformedRecord, std::string(key) + " must be a string");
  return v.get<std::string>();
}

template <class Fixed>
Fixed get_fixed(const ojson& j, const char* key) {
  return Fixed::from_hex(get_string(j, key));
}

Amount get_amount(const ojson& j, const char* key) { return Amount::parse(get_string(j, key)); }

ojson payload_json(const Transaction& tx) {
  ojson p = ojson::object();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CreateEventPayload>) {
          p["owner"] = v.owner.hex();
          p["owner_name"] = v.owner_name;
          p["title"] = v.title;
          p["description"] = v.description;
          p["target"] = v.target.to_string();
          p["deadline"] = v.deadline.ms;
          p["image"] = v.image.text();
        } else if constexpr (std::is_same_v<T, DonatePayload>) {
          p["event_id"] = v.event_id.hex();
          p["amount"] = v.amount.to_string();
        } else {
          p["event_id"] = v.event_id.hex();
          p["recipient"] = v.recipient.hex();
          p["amount"] = v.amount.to_string();
        }
      },
      tx.payload);
  return p;
}

}  // namespace

ojson to_json(const Transaction& tx) {
  ojson j;
  j["kind"] = std::string(to_string(tx.kind()));
  j["sender_pk"] = tx.sender_pk.hex();
  j["nonce"] = tx.nonce;
  j["fee"] = tx.fee.to_string();
  j["payload"] = payload_json(tx);
  j["signature"] = to_hex(tx.signature);
  j["tx_hash"] = tx.tx_hash.hex();
  return j;
}

Transaction transaction_from_json(const ojson& j) {
  Transaction tx;
  auto kind = parse_tx_kind(get_string(j, "kind"));
  tx.sender_pk = get_fixed<PublicKey>(j, "sender_pk");
  tx.nonce = get_u64(j, "nonce");
  tx.fee = get_amount(j, "fee");
  const auto& p = field(j, "payload");
  switch (kind) {
    case TxKind::CreateEvent: {
      CreateEventPayload c;
      c.owner = get_fixed<Address>(p, "owner");
      c.owner_name = get_string(p, "owner_name");
      c.title = get_string(p, "title");
      c.description = get_string(p, "description");
      c.target = get_amount(p, "target");
      c.deadline = Timestamp{get_u64(p, "deadline")};
      c.image = Cid::parse(get_string(p, "image"));
      tx.payload = std::move(c);
      break;
    }
    case TxKind::Donate:
      tx.payload = DonatePayload{get_fixed<Hash32>(p, "event_id"), get_amount(p, "amount")};
      break;
    case TxKind::Refund:
      tx.payload = RefundPayload{get_fixed<Hash32>(p, "event_id"), get_fixed<Address>(p, "recipient"),
                                 get_amount(p, "amount")};
      break;
  }
  tx.signature = from_hex(get_string(j, "signature"));
  tx.tx_hash = get_fixed<Hash32>(j, "tx_hash");
  return tx;
}

ojson to_json(const Block& block) {
  ojson j;
  j["height"] = block.height;
  j["prev_hash"] = block.prev_hash.hex();
  j["merkle_root"] = block.merkle_root.hex();
  j["timestamp"] = block.timestamp.ms;
  ojson txs = ojson::array();
  for (const auto& tx : block.transactions) txs.push_back(to_json(tx));
  j["txs"] = std::move(txs);
  if (block.genesis) {
    ojson g;
    g["scheme"] = block.genesis->scheme;
    g["fee"] = block.genesis->fee.to_string();
    ojson allocs = ojson::array();
    for (const auto& [addr, amount] : block.genesis->allocations) {
      allocs.push_back(ojson{{"address", addr.hex()}, {"amount", amount.to_string()}});
    }
    g["allocations"] = std::move(allocs);
    j["genesis"] = std::move(g);
  }
  j["block_hash"] = block.block_hash.hex();
  return j;
}

Block block_from_json(const ojson& j) {
  Block b;
  b.height = get_u64(j, "height");
  b.prev_hash = get_fixed<Hash32>(j, "prev_hash");
  b.merkle_root = get_fixed<Hash32>(j, "merkle_root");
  b.timestamp = Timestamp{get_u64(j, "timestamp")};
  const auto& txs = field(j, "txs");
  if (!txs.is_array()) throw Error(errc::MalformedRecord, "txs must be an array");
  for (const auto& t : txs) b.transactions.push_back(transaction_from_json(t));
  if (j.contains("genesis")) {
    const auto& g = j.at("genesis");
    GenesisParams params;
    params.scheme = get_string(g, "scheme");
    params.fee = get_amount(g, "fee");
    const auto& allocs = field(g, "allocations");
    if (!allocs.is_array()) throw Error(errc::MalformedRecord, "allocations must be an array");
    for (const auto& a : allocs) {
      params.allocations.emplace_back(get_fixed<Address>(a, "address"), get_amount(a, "amount"));
    }
    b.genesis = std::move(params);
  }
  b.block_hash = get_fixed<Hash32>(j, "block_hash");
  return b;
}

std::string encode_record(const Block& block) { return to_json(block).dump(); }

Block decode_record(std::string_view line) {
  ojson j;
  try {
    j = ojson::parse(line);
  } catch (const ojson::exception& e) {
    throw Error(errc::MalformedRecord, e.what());
  }
  Block block;
  try {
    block = block_from_json(j);
  } catch (const Error& e) {
    throw Error(errc::MalformedRecord, e.what());
  }
  std::string canonical;
  try {
    canonical = encode_record(block);
  } catch (const ojson::exception& e) {
    throw Error(errc::MalformedRecord, e.what());
  }
  if (canonical != line) throw Error(errc::MalformedRecord, "record is not in canonical form");
  return block;
}

fs::path chain_file(const fs::path& dir) { return dir / kChainFileName; }

void save_chain(const Chain& chain, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  auto target = chain_file(dir);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::IoError, "cannot write " + tmp.string());
    for (const auto& block : chain.blocks()) out << encode_record(block) << '\n';
    out.flush();
    if (!out) throw Error(errc::IoError, "short write to " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) throw Error(errc::IoError, "cannot rename into " + target.string() + ": " + ec.message());
}

ChainFileScan scan_chain_file(const fs::path& dir) {
  auto path = chain_file(dir);
  if (!fs::exists(path)) throw Error(errc::EmptyStore, "no chain file in " + dir.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::IoError, "cannot read " + path.string());
  std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (content.empty()) throw Error(errc::EmptyStore, path.string() + " is empty");

  ChainFileScan scan;
  std::size_t pos = 0;
  std::uint64_t height = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string::npos) {
      scan.failure = ValidationReport::failure(height, errc::MalformedRecord, "unterminated record");
      return scan;
    }
    try {
      scan.blocks.push_back(decode_record(std::string_view(content).substr(pos, nl - pos)));
    } catch (const Error& e) {
      scan.failure = ValidationReport::failure(height, e.kind(), e.detail());
      return scan;
    }
    pos = nl + 1;
    ++height;
  }
  return scan;
}

Chain load_chain(const fs::path& dir) {
  auto scan = scan_chain_file(dir);
  if (scan.failure) {
    throw Error(errc::CorruptChain, "height " + std::to_string(scan.failure->height) + ": " + scan.failure->detail,
                scan.failure->kind, scan.failure->height);
  }
  return Chain::from_blocks(std::move(scan.blocks));
}

ValidationReport verify_chain_store(const fs::path& dir) {
  auto scan = scan_chain_file(dir);
  if (scan.failure && scan.blocks.empty()) return *scan.failure;
  // Blocks before a syntax failure must still be checked: an earlier
  // semantic failure takes precedence.
  auto report = validate_blocks(scan.blocks);
  if (!report.ok) return report;
  if (scan.failure) return *scan.failure;
  return report;
}

}  // namespace dnb
