#include "dnb/identity.hpp"

#include <fstream>
#include <iterator>
#include <system_error>

#include "dnb/chain_io.hpp"

namespace fs = std::filesystem;

namespace dnb {

KeyPair KeyPair::from_secret(const crypto::SecretKey& sk) { return KeyPair{sk, crypto::public_key_of(sk)}; }

KeyPair KeyPair::generate(std::optional<std::uint64_t> seed) {
  if (!seed) return from_secret(crypto::random_secret_key());
  Writer w;
  w.u64(*seed);
  auto digest = crypto::Sha256().update("dnb-wallet-seed").update(w.bytes()).finish();
  crypto::SecretKey sk;
  sk.seed = digest.bytes;
  return from_secret(sk);
}

Did Did::of(const PublicKey& pk) {
  Did did;
  did.digest_ = crypto::sha256(pk.view());
  did.text_ = std::string(kDidPrefix) + base32_encode(did.digest_.view());
  return did;
}

Did Did::parse(std::string_view text) {
  if (!text.starts_with(kDidPrefix)) throw Error(errc::MalformedDid, std::string(text));
  Bytes raw;
  try {
    raw = base32_decode(text.substr(kDidPrefix.size()));
  } catch (const Error&) {
    throw Error(errc::MalformedDid, std::string(text));
  }
  if (raw.size() != Hash32::size) throw Error(errc::MalformedDid, "digest must be 32 bytes");
  Did did;
  did.digest_ = Hash32::from_view(raw);
  did.text_ = std::string(text);
  return did;
}

Wallet new_wallet(std::string name, std::optional<std::uint64_t> seed, std::string network_name) {
  auto keys = KeyPair::generate(seed);
  auto address = address_of(keys.public_key);
  auto did = Did::of(keys.public_key);
  return Wallet{std::move(name), keys, address, std::move(did), std::move(network_name)};
}

WalletInfo wallet_info(const Wallet& wallet, const Chain& chain) {
  return WalletInfo{wallet.address.hex(), chain.state().balance_of(wallet.address), wallet.network_name};
}

Hash32 auth_digest(ByteView challenge) { return crypto::Sha256().update(kAuthDomain).update(challenge).finish(); }

AuthResponse respond_to_challenge(const KeyPair& keys, ByteView challenge) {
  auto digest = auth_digest(challenge);
  return AuthResponse{keys.public_key, crypto::sign(keys.secret, digest.view())};
}

bool authenticate(std::string_view did_text, ByteView challenge, const AuthResponse& response) {
  auto did = Did::parse(did_text);
  if (challenge.size() < kMinChallengeSize) {
    throw Error(errc::InvalidChallenge, "challenge must be at least 16 bytes");
  }
  if (Did::of(response.public_key).digest() != did.digest()) return false;
  return crypto::verify(response.public_key, auth_digest(challenge).view(), response.signature);
}

void save_wallet(const Wallet& wallet, const fs::path& file) {
  ojson j;
  j["name"] = wallet.name;
  j["public"] = wallet.keys.public_key.hex();
  j["secret"] = to_hex(wallet.keys.secret.seed);
  j["did"] = wallet.did.text();
  j["network_name"] = wallet.network_name;

  std::error_code ec;
  if (file.has_parent_path()) fs::create_directories(file.parent_path(), ec);
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::IoError, "cannot write " + tmp.string());
    // Restrict before the secret is written.
    fs::permissions(tmp, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace, ec);
    out << j.dump(2) << '\n';
    if (!out) throw Error(errc::IoError, "short write to " + tmp.string());
  }
  fs::rename(tmp, file, ec);
  if (ec) throw Error(errc::IoError, "cannot rename into " + file.string() + ": " + ec.message());
}

Wallet load_wallet(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(errc::UnknownWallet, file.string());
  ojson j;
  try {
    j = ojson::parse(in);
    crypto::SecretKey sk;
    auto secret = from_hex(j.at("secret").get<std::string>());
    if (secret.size() != sk.seed.size()) throw Error(errc::MalformedRecord, "secret must be 32 bytes");
    std::copy(secret.begin(), secret.end(), sk.seed.begin());
    auto keys = KeyPair::from_secret(sk);
    if (keys.public_key != PublicKey::from_hex(j.at("public").get<std::string>())) {
      throw Error(errc::MalformedRecord, "public key does not match secret");
    }
    auto did = Did::of(keys.public_key);
    if (did.text() != j.at("did").get<std::string>()) throw Error(errc::MalformedRecord, "did does not match key");
    return Wallet{j.at("name").get<std::string>(), keys, address_of(keys.public_key), did,
                  j.at("network_name").get<std::string>()};
  } catch (const ojson::exception& e) {
    throw Error(errc::MalformedRecord, file.string() + ": " + e.what());
  }
}

}  // namespace dnb
