#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace epibias {

enum class ErrorCode {
  EmptyInput,
  NotEnoughContext,
  BackendUnavailable,
  DimensionMismatch,
  NonFiniteInput,
  NoScoreableTokens,
  ParseError,
  ZeroVector,
  MissingSubject,
  UnknownSubject,
  IoError,
  CorruptRecord,
  AuthError,
  RateLimited,
  NetworkError,
  UnknownJob,
  UnknownDocument,
  BadRequest,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as an Error. `stage` names the
// pipeline stage (or backend) that raised it, when known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string stage = {})
      : std::runtime_error(message), code_(code), stage_(std::move(stage)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorCode code_;
  std::string stage_;
};

// Raised by search clients when the server asks us to back off.
class RateLimitedError : public Error {
 public:
  RateLimitedError(const std::string& message, int retry_after_seconds)
      : Error(ErrorCode::RateLimited, message, "search"),
        retry_after_seconds_(retry_after_seconds) {}

  int retry_after_seconds() const noexcept { return retry_after_seconds_; }

 private:
  int retry_after_seconds_;
};

}  // namespace epibias
