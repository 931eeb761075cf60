#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdmp {

enum class ErrorCode {
  PartCountTooSmall,
  PartCountTooLarge,
  MessageTooLarge,
  PayloadTooLarge,
  CorruptLengthPrefix,
  MissingCombination,
  MalformedFrame,
  BadThreshold,
  NotEnoughShares,
  DuplicateShareX,
  ParseError,
  ValidationError,
  UnknownNode,
  NoPath,
  MissingProbability,
  TooManyRelays,
  ChannelBusy,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace sdmp
