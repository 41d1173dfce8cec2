//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rtmol/error.h"

namespace rtmol {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::kEmptyInput:
    return "EmptyInput";
  case ErrorCode::kUnclosedRing:
    return "UnclosedRing";
  case ErrorCode::kUnbalancedParenthesis:
    return "UnbalancedParenthesis";
  case ErrorCode::kUnknownToken:
    return "UnknownToken";
  case ErrorCode::kInvalidBond:
    return "InvalidBond";
  case ErrorCode::kFamilyMismatch:
    return "FamilyMismatch";
  case ErrorCode::kInvalidReference:
    return "InvalidReference";
  case ErrorCode::kEmptyCollection:
    return "EmptyCollection";
  case ErrorCode::kLengthMismatch:
    return "LengthMismatch";
  case ErrorCode::kGroupTooSmall:
    return "GroupTooSmall";
  case ErrorCode::kMissingLogProbs:
    return "MissingLogProbs";
  case ErrorCode::kUnsupportedZero:
    return "UnsupportedZero";
  case ErrorCode::kInvalidSystem:
    return "InvalidSystem";
  case ErrorCode::kUnknownState:
    return "UnknownState";
  case ErrorCode::kStaleSnapshot:
    return "StaleSnapshot";
  case ErrorCode::kTimeout:
    return "Timeout";
  case ErrorCode::kHttpStatus:
    return "HttpStatus";
  case ErrorCode::kMalformedResponse:
    return "MalformedResponse";
  case ErrorCode::kAuthMissing:
    return "AuthMissing";
  case ErrorCode::kAdapterFailure:
    return "AdapterFailure";
  case ErrorCode::kIoFailure:
    return "IoFailure";
  case ErrorCode::kFormatUnknown:
    return "FormatUnknown";
  case ErrorCode::kInvalidArgument:
    return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace rtmol
