#include "dnb/crypto.hpp"

#include <sodium.h>

#include <cstring>

namespace dnb::crypto {

namespace {

struct SodiumInit {
  SodiumInit() {
    if (sodium_init() < 0) throw Error(errc::IoError, "libsodium initialization failed");
  }
};

void ensure_sodium() { static const SodiumInit init; }

static_assert(sizeof(crypto_hash_sha256_state) <= 128);

std::array<std::uint8_t, 64> expand(const SecretKey& sk, PublicKey* pk_out) {
  ensure_sodium();
  std::array<std::uint8_t, crypto_sign_PUBLICKEYBYTES> raw_pk{};
  std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> expanded{};
  crypto_sign_seed_keypair(raw_pk.data(), expanded.data(), sk.seed.data());
  if (pk_out != nullptr) {
    pk_out->bytes[0] = kEd25519Tag;
    std::memcpy(pk_out->bytes.data() + 1, raw_pk.data(), raw_pk.size());
  }
  return expanded;
}

}  // namespace

Hash32 sha256(ByteView data) {
  ensure_sodium();
  Hash32 out;
  crypto_hash_sha256(out.bytes.data(), data.data(), data.size());
  return out;
}

Sha256::Sha256() {
  ensure_sodium();
  crypto_hash_sha256_init(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()));
}

Sha256& Sha256::update(ByteView data) {
  crypto_hash_sha256_update(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()), data.data(),
                            data.size());
  return *this;
}

Hash32 Sha256::finish() {
  Hash32 out;
  crypto_hash_sha256_final(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()), out.bytes.data());
  return out;
}

PublicKey public_key_of(const SecretKey& sk) {
  PublicKey pk;
  auto expanded = expand(sk, &pk);
  sodium_memzero(expanded.data(), expanded.size());
  return pk;
}

SecretKey random_secret_key() {
  ensure_sodium();
  SecretKey sk;
  randombytes_buf(sk.seed.data(), sk.seed.size());
  return sk;
}

Bytes sign(const SecretKey& sk, ByteView message) {
  auto expanded = expand(sk, nullptr);
  Bytes sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), expanded.data());
  sodium_memzero(expanded.data(), expanded.size());
  return sig;
}

bool verify(const PublicKey& pk, ByteView message, ByteView signature) {
  ensure_sodium();
  if (signature.size() != crypto_sign_BYTES) return false;
  if (pk.bytes[0] != kEd25519Tag) return false;
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                     pk.bytes.data() + 1) == 0;
}

}  // namespace dnb::crypto
