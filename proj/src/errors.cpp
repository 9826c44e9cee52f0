// SPDX-License-Identifier: Apache-2.0
#include "cop/errors.hpp"

namespace cop {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation: return "Validation";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::NoScriptedRule: return "NoScriptedRule";
    case ErrorCode::Transport: return "Transport";
    case ErrorCode::ProviderRefusal: return "ProviderRefusal";
    case ErrorCode::StructuredOutputFailure: return "StructuredOutputFailure";
    case ErrorCode::DesignInvalid: return "DesignInvalid";
    case ErrorCode::IncompleteRequirements: return "IncompleteRequirements";
    case ErrorCode::NothingMissing: return "NothingMissing";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::EmptyAnswer: return "EmptyAnswer";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::EmptyCode: return "EmptyCode";
    case ErrorCode::InvalidFeedback: return "InvalidFeedback";
    case ErrorCode::WrongState: return "WrongState";
    case ErrorCode::AnnotationInvalid: return "AnnotationInvalid";
    case ErrorCode::UnknownLanguage: return "UnknownLanguage";
    case ErrorCode::EmptyVerdicts: return "EmptyVerdicts";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::WrongPhase: return "WrongPhase";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::ClarificationExhausted: return "ClarificationExhausted";
    case ErrorCode::CorruptLog: return "CorruptLog";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
  }
  return "Unknown";
}

Json Error::to_json() const {
  return {{"error", std::string(to_string(code_))}, {"message", what()}, {"details", details_}};
}

}  // namespace cop
