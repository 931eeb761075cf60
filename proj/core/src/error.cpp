#include "sdmp/error.hpp"

namespace sdmp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::PartCountTooSmall: return "PartCountTooSmall";
    case ErrorCode::PartCountTooLarge: return "PartCountTooLarge";
    case ErrorCode::MessageTooLarge: return "MessageTooLarge";
    case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::CorruptLengthPrefix: return "CorruptLengthPrefix";
    case ErrorCode::MissingCombination: return "MissingCombination";
    case ErrorCode::MalformedFrame: return "MalformedFrame";
    case ErrorCode::BadThreshold: return "BadThreshold";
    case ErrorCode::NotEnoughShares: return "NotEnoughShares";
    case ErrorCode::DuplicateShareX: return "DuplicateShareX";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::MissingProbability: return "MissingProbability";
    case ErrorCode::TooManyRelays: return "TooManyRelays";
    case ErrorCode::ChannelBusy: return "ChannelBusy";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace sdmp
