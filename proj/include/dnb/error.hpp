#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dnb {

enum class errc {
  // encoding / primitives
  EncodingOverflow,
  InvalidUtf8,
  MalformedHex,
  MalformedAmount,
  AmountOverflow,
  MalformedRecord,
  // ledger
  BadSignature,
  BadNonce,
  BadFee,
  InsufficientBalance,
  InvalidTransaction,
  NonMonotoneTimestamp,
  UnauthorizedRefund,
  RefundMismatch,
  HeightMismatch,
  PrevHashMismatch,
  BlockHashMismatch,
  MerkleMismatch,
  TxHashMismatch,
  GenesisInvalid,
  UnsupportedScheme,
  CorruptChain,
  EmptyStore,
  // contracts
  ZeroTarget,
  DeadlineInPast,
  TitleInvalid,
  DescriptionTooLong,
  DuplicateEventId,
  UnknownEvent,
  EventNotActive,
  DeadlinePassed,
  DeadlineNotReached,
  ZeroAmount,
  AlreadyFinal,
  // identity
  MalformedDid,
  InvalidChallenge,
  UnknownWallet,
  WalletExists,
  // content store
  MalformedCid,
  BlobTooLarge,
  NotFound,
  CorruptBlob,
  UnknownPlatform,
  // simnet / config / cli
  InvalidConfig,
  EmptySearchSpace,
  Locked,
  NotInitialized,
  AlreadyInitialized,
  IoError,
};

std::string_view to_string(errc kind);

/// Domain error. `what()` is "<Kind>: <detail>".
///
/// Errors raised while applying a transaction inside a batch are wrapped as
/// `InvalidTransaction`; `cause()` then carries the underlying kind and
/// `index()` the position of the offending transaction.
class Error : public std::runtime_error {
 public:
  Error(errc kind, std::string detail = {});
  Error(errc kind, std::string detail, errc cause, std::size_t index);

  errc kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<errc> cause() const noexcept { return cause_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

  // The most specific kind: the cause for wrapped errors, the kind otherwise.
  errc root_kind() const noexcept { return cause_.value_or(kind_); }

 private:
  errc kind_;
  std::string detail_;
  std::optional<errc> cause_;
  std::optional<std::size_t> index_;
};

}  // namespace dnb
