// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "cop/json.hpp"

namespace cop {

enum class ErrorCode {
  Validation,
  SchemaViolation,
  ParseError,
  DuplicateId,
  NoScriptedRule,
  Transport,
  ProviderRefusal,
  StructuredOutputFailure,
  DesignInvalid,
  IncompleteRequirements,
  NothingMissing,
  UnknownElement,
  EmptyAnswer,
  MissingArtifact,
  EmptyCode,
  InvalidFeedback,
  WrongState,
  AnnotationInvalid,
  UnknownLanguage,
  EmptyVerdicts,
  OutOfRange,
  IoFailure,
  WrongPhase,
  UnknownSession,
  ClarificationExhausted,
  CorruptLog,
  BackendUnavailable,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library. `code()` identifies the failure
/// class; `details()` carries structured context (violation lists, the
/// offending field or sequence number, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, Json details = Json::object())
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const Json& details() const noexcept { return details_; }

  Json to_json() const;

 private:
  ErrorCode code_;
  Json details_;
};

}  // namespace cop
