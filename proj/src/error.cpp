#include "epibias/error.hpp"

namespace epibias {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NotEnoughContext: return "NotEnoughContext";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::NoScoreableTokens: return "NoScoreableTokens";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::MissingSubject: return "MissingSubject";
    case ErrorCode::UnknownSubject: return "UnknownSubject";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::CorruptRecord: return "CorruptRecord";
    case ErrorCode::AuthError: return "AuthError";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::UnknownJob: return "UnknownJob";
    case ErrorCode::UnknownDocument: return "UnknownDocument";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace epibias
