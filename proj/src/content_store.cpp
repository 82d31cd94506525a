#include "dnb/content_store.hpp"

#include <atomic>
#include <fstream>
#include <iterator>
#include <random>
#include <system_error>

#include <unistd.h>

#include "dnb/crypto.hpp"

namespace fs = std::filesystem;

namespace dnb {

Cid Cid::of(ByteView content) { return Cid{kRawCodec, crypto::sha256(content)}; }

Cid Cid::from_binary(ByteView raw) {
  if (raw.size() != kEncodedSize) throw Error(errc::MalformedCid, "wrong length");
  if (raw[0] != kRawCodec) throw Error(errc::MalformedCid, "unknown codec");
  return Cid{raw[0], Hash32::from_view(raw.subspan(1))};
}

Cid Cid::parse(std::string_view text) {
  if (text.empty() || text.front() != 'b') throw Error(errc::MalformedCid, "missing multibase prefix");
  Bytes raw;
  try {
    raw = base32_decode(text.substr(1));
  } catch (const Error&) {
    throw Error(errc::MalformedCid, std::string(text));
  }
  return from_binary(raw);
}

std::string Cid::text() const { return "b" + base32_encode(binary()); }

Bytes Cid::binary() const {
  Bytes out;
  out.reserve(kEncodedSize);
  out.push_back(codec);
  out.insert(out.end(), digest.bytes.begin(), digest.bytes.end());
  return out;
}

Platform parse_platform(std::string_view name) {
  if (name == "twitter") return Platform::twitter;
  if (name == "facebook") return Platform::facebook;
  if (name == "whatsapp") return Platform::whatsapp;
  if (name == "instagram") return Platform::instagram;
  throw Error(errc::UnknownPlatform, std::string(name));
}

std::string_view to_string(Platform p) {
  switch (p) {
    case Platform::twitter: return "twitter";
    case Platform::facebook: return "facebook";
    case Platform::whatsapp: return "whatsapp";
    case Platform::instagram: return "instagram";
  }
  return "unknown";
}

std::string share_link(const Hash32& event_id, const Cid& cid, Platform platform) {
  std::string out = "dnb://share/";
  out += to_string(platform);
  out += '/';
  out += cid.text();
  out += "?event=";
  out += event_id.hex();
  return out;
}

std::string share_link(const Hash32& event_id, const Cid& cid, std::string_view platform) {
  return share_link(event_id, cid, parse_platform(platform));
}

ContentStore::ContentStore(fs::path dir, std::uint64_t max_blob) : dir_(std::move(dir)), max_blob_(max_blob) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(errc::IoError, "cannot create " + dir_.string() + ": " + ec.message());
}

namespace {

std::string temp_suffix() {
  static std::atomic<std::uint64_t> counter{0};
  static const std::uint64_t salt = std::random_device{}();
  return ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(salt) + "-" +
         std::to_string(counter.fetch_add(1));
}

}  // namespace

Cid ContentStore::put(ByteView content) {
  if (content.size() > max_blob_) {
    throw Error(errc::BlobTooLarge,
                std::to_string(content.size()) + " bytes exceeds max_blob " + std::to_string(max_blob_));
  }
  auto cid = Cid::of(content);
  auto target = path_of(cid);
  if (fs::exists(target)) return cid;

  auto tmp = dir_ / (cid.text() + temp_suffix());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::IoError, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(content.data()), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(errc::IoError, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(errc::IoError, "cannot rename into " + target.string());
  }
  return cid;
}

Bytes ContentStore::get(const Cid& cid) const {
  auto path = path_of(cid);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::NotFound, cid.text());
  Bytes data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw Error(errc::IoError, "read failed: " + path.string());
  if (crypto::sha256(data) != cid.digest) throw Error(errc::CorruptBlob, cid.text());
  return data;
}

bool ContentStore::contains(const Cid& cid) const { return fs::exists(path_of(cid)); }

std::size_t ContentStore::blob_count() const {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (entry.is_regular_file() && entry.path().filename().string().find(".tmp-") == std::string::npos) ++n;
  }
  return n;
}

std::uint64_t ContentStore::total_bytes() const {
  std::uint64_t n = 0;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (entry.is_regular_file() && entry.path().filename().string().find(".tmp-") == std::string::npos) {
      n += entry.file_size();
    }
  }
  return n;
}

}  // namespace dnb
