#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "dnb/bytes.hpp"

namespace dnb {

/// Content identifier: codec byte plus the SHA-256 of the stored bytes.
///
/// Text form is `b` followed by base32 (lowercase, unpadded) of
/// `codec || digest`. Only the raw codec exists.
struct Cid {
  static constexpr std::uint8_t kRawCodec = 0x55;
  static constexpr std::size_t kEncodedSize = 33;

  std::uint8_t codec = kRawCodec;
  Hash32 digest;

  static Cid of(ByteView content);
  static Cid parse(std::string_view text);
  static Cid from_binary(ByteView raw33);

  std::string text() const;
  Bytes binary() const;

  friend auto operator<=>(const Cid&, const Cid&) = default;
};

enum class Platform { twitter, facebook, whatsapp, instagram };

Platform parse_platform(std::string_view name);
std::string_view to_string(Platform p);

/// `dnb://share/{platform}/{cid}?event={event_id hex}`. No network activity.
std::string share_link(const Hash32& event_id, const Cid& cid, Platform platform);
std::string share_link(const Hash32& event_id, const Cid& cid, std::string_view platform);

/// Directory-backed blob store. One file per blob, named by CID text.
/// Writes land under a temporary name and are renamed into place, so
/// concurrent writers of the same blob converge on identical content.
class ContentStore {
 public:
  static constexpr std::uint64_t kDefaultMaxBlob = 16ull * 1024 * 1024;

  explicit ContentStore(std::filesystem::path dir, std::uint64_t max_blob = kDefaultMaxBlob);

  Cid put(ByteView content);
  Bytes get(const Cid& cid) const;
  bool contains(const Cid& cid) const;

  std::size_t blob_count() const;
  std::uint64_t total_bytes() const;

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_of(const Cid& cid) const { return dir_ / cid.text(); }

 private:
  std::filesystem::path dir_;
  std::uint64_t max_blob_;
};

}  // namespace dnb
