// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ALLOKIT_ERROR_HPP
#define ALLOKIT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace allokit {

enum class Errc {
  InvalidIPA,
  UnknownXSampa,
  ParseError,
  IoError,
  EmptyDb,
  DuplicateLanguageKey,
  UnknownLanguage,
  BadN,
  PhoneNotInInventory,
  DimensionMismatch,
  InvalidDistribution,
  EmptyReference,
  BadNoise,
  UnknownPhone,
  DuplicateDocId,
  EmptyDoc,
  EmptyQuery,
  BadArgument,
};

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidIPA: return "InvalidIPA";
    case Errc::UnknownXSampa: return "UnknownXSampa";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    case Errc::EmptyDb: return "EmptyDb";
    case Errc::DuplicateLanguageKey: return "DuplicateLanguageKey";
    case Errc::UnknownLanguage: return "UnknownLanguage";
    case Errc::BadN: return "BadN";
    case Errc::PhoneNotInInventory: return "PhoneNotInInventory";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidDistribution: return "InvalidDistribution";
    case Errc::EmptyReference: return "EmptyReference";
    case Errc::BadNoise: return "BadNoise";
    case Errc::UnknownPhone: return "UnknownPhone";
    case Errc::DuplicateDocId: return "DuplicateDocId";
    case Errc::EmptyDoc: return "EmptyDoc";
    case Errc::EmptyQuery: return "EmptyQuery";
    case Errc::BadArgument: return "BadArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace allokit

#endif  // ALLOKIT_ERROR_HPP
