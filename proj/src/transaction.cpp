#include "dnb/transaction.hpp"

#include <algorithm>

namespace dnb {

std::string_view to_string(TxKind kind) {
  switch (kind) {
    case TxKind::CreateEvent: return "create_event";
    case TxKind::Donate: return "donate";
    case TxKind::Refund: return "refund";
  }
  return "unknown";
}

TxKind parse_tx_kind(std::string_view name) {
  if (name == "create_event") return TxKind::CreateEvent;
  if (name == "donate") return TxKind::Donate;
  if (name == "refund") return TxKind::Refund;
  throw Error(errc::MalformedRecord, "unknown transaction kind '" + std::string(name) + "'");
}

Address address_of(const PublicKey& pk) {
  auto digest = crypto::sha256(pk.view());
  return Address::from_view(digest.view().subspan(Hash32::size - Address::size));
}

namespace {

void encode_text(Writer& w, const std::string& s) {
  if (!is_valid_utf8(s)) throw Error(errc::InvalidUtf8);
  w.text(s);
}

struct PayloadEncoder {
  Writer& w;
  void operator()(const CreateEventPayload& p) const {
    w.fixed(p.owner);
    encode_text(w, p.owner_name);
    encode_text(w, p.title);
    encode_text(w, p.description);
    w.u128(p.target.value());
    w.u64(p.deadline.ms);
    w.raw(p.image.binary());
  }
  void operator()(const DonatePayload& p) const {
    w.fixed(p.event_id);
    w.u128(p.amount.value());
  }
  void operator()(const RefundPayload& p) const {
    w.fixed(p.event_id);
    w.fixed(p.recipient);
    w.u128(p.amount.value());
  }
};

}  // namespace

Bytes canonical_encode(const Transaction& tx) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(tx.kind()));
  w.fixed(tx.sender_pk);
  w.u64(tx.nonce);
  w.u128(tx.fee.value());
  std::visit(PayloadEncoder{w}, tx.payload);
  return std::move(w).take();
}

Transaction canonical_decode(ByteView preimage) {
  Reader r(preimage);
  Transaction tx;
  auto tag = r.u8();
  tx.sender_pk = r.fixed<PublicKey>();
  tx.nonce = r.u64();
  tx.fee = Amount(r.u128());
  switch (tag) {
    case static_cast<std::uint8_t>(TxKind::CreateEvent): {
      CreateEventPayload p;
      p.owner = r.fixed<Address>();
      p.owner_name = r.text();
      p.title = r.text();
      p.description = r.text();
      p.target = Amount(r.u128());
      p.deadline = Timestamp{r.u64()};
      p.image = Cid::from_binary(r.raw(Cid::kEncodedSize));
      tx.payload = std::move(p);
      break;
    }
    case static_cast<std::uint8_t>(TxKind::Donate): {
      DonatePayload p;
      p.event_id = r.fixed<Hash32>();
      p.amount = Amount(r.u128());
      tx.payload = p;
      break;
    }
    case static_cast<std::uint8_t>(TxKind::Refund): {
      RefundPayload p;
      p.event_id = r.fixed<Hash32>();
      p.recipient = r.fixed<Address>();
      p.amount = Amount(r.u128());
      tx.payload = p;
      break;
    }
    default:
      throw Error(errc::MalformedRecord, "unknown kind tag " + std::to_string(tag));
  }
  if (!r.done()) throw Error(errc::MalformedRecord, "trailing bytes after transaction");
  return tx;
}

Hash32 compute_tx_hash(const Transaction& tx) {
  return crypto::Sha256().update(canonical_encode(tx)).update(tx.signature).finish();
}

Transaction sign_transaction(Transaction tx, const crypto::SecretKey& sk) {
  auto preimage = canonical_encode(tx);
  tx.signature = crypto::sign(sk, preimage);
  tx.tx_hash = crypto::Sha256().update(preimage).update(tx.signature).finish();
  return tx;
}

bool verify_transaction(const Transaction& tx) {
  Bytes preimage;
  try {
    preimage = canonical_encode(tx);
  } catch (const Error&) {
    return false;
  }
  auto recomputed = crypto::Sha256().update(preimage).update(tx.signature).finish();
  if (recomputed != tx.tx_hash) return false;
  if (tx.is_system()) {
    return tx.sender_pk.is_zero() && tx.signature.empty() && tx.nonce == 0 && tx.fee.is_zero();
  }
  return crypto::verify(tx.sender_pk, preimage, tx.signature);
}

Transaction make_refund(const Hash32& event_id, const Address& recipient, Amount amount) {
  Transaction tx;
  tx.payload = RefundPayload{event_id, recipient, amount};
  tx.tx_hash = compute_tx_hash(tx);
  return tx;
}

}  // namespace dnb
