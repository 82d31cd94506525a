#include "dnb/error.hpp"

namespace dnb {

std::string_view to_string(errc kind) {
  switch (kind) {
    case errc::EncodingOverflow: return "EncodingOverflow";
    case errc::InvalidUtf8: return "InvalidUtf8";
    case errc::MalformedHex: return "MalformedHex";
    case errc::MalformedAmount: return "MalformedAmount";
    case errc::AmountOverflow: return "AmountOverflow";
    case errc::MalformedRecord: return "MalformedRecord";
    case errc::BadSignature: return "BadSignature";
    case errc::BadNonce: return "BadNonce";
    case errc::BadFee: return "BadFee";
    case errc::InsufficientBalance: return "InsufficientBalance";
    case errc::InvalidTransaction: return "InvalidTransaction";
    case errc::NonMonotoneTimestamp: return "NonMonotoneTimestamp";
    case errc::UnauthorizedRefund: return "UnauthorizedRefund";
    case errc::RefundMismatch: return "RefundMismatch";
    case errc::HeightMismatch: return "HeightMismatch";
    case errc::PrevHashMismatch: return "PrevHashMismatch";
    case errc::BlockHashMismatch: return "BlockHashMismatch";
    case errc::MerkleMismatch: return "MerkleMismatch";
    case errc::TxHashMismatch: return "TxHashMismatch";
    case errc::GenesisInvalid: return "GenesisInvalid";
    case errc::UnsupportedScheme: return "UnsupportedScheme";
    case errc::CorruptChain: return "CorruptChain";
    case errc::EmptyStore: return "EmptyStore";
    case errc::ZeroTarget: return "ZeroTarget";
    case errc::DeadlineInPast: return "DeadlineInPast";
    case errc::TitleInvalid: return "TitleInvalid";
    case errc::DescriptionTooLong: return "DescriptionTooLong";
    case errc::DuplicateEventId: return "DuplicateEventId";
    case errc::UnknownEvent: return "UnknownEvent";
    case errc::EventNotActive: return "EventNotActive";
    case errc::DeadlinePassed: return "DeadlinePassed";
    case errc::DeadlineNotReached: return "DeadlineNotReached";
    case errc::ZeroAmount: return "ZeroAmount";
    case errc::AlreadyFinal: return "AlreadyFinal";
    case errc::MalformedDid: return "MalformedDid";
    case errc::InvalidChallenge: return "InvalidChallenge";
    case errc::UnknownWallet: return "UnknownWallet";
    case errc::WalletExists: return "WalletExists";
    case errc::MalformedCid: return "MalformedCid";
    case errc::BlobTooLarge: return "BlobTooLarge";
    case errc::NotFound: return "NotFound";
    case errc::CorruptBlob: return "CorruptBlob";
    case errc::UnknownPlatform: return "UnknownPlatform";
    case errc::InvalidConfig: return "InvalidConfig";
    case errc::EmptySearchSpace: return "EmptySearchSpace";
    case errc::Locked: return "Locked";
    case errc::NotInitialized: return "NotInitialized";
    case errc::AlreadyInitialized: return "AlreadyInitialized";
    case errc::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string format_what(errc kind, const std::string& detail) {
  std::string out{to_string(kind)};
  if (!detail.empty()) {
    out += ": ";
    out += detail;
  }
  return out;
}

}  // namespace

Error::Error(errc kind, std::string detail)
    : std::runtime_error(format_what(kind, detail)), kind_(kind), detail_(std::move(detail)) {}

Error::Error(errc kind, std::string detail, errc cause, std::size_t index)
    : std::runtime_error(format_what(kind, detail)),
      kind_(kind),
      detail_(std::move(detail)),
      cause_(cause),
      index_(index) {}

}  // namespace dnb
