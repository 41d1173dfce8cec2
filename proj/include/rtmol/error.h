//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_ERROR_H_
#define RTMOL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rtmol {

enum class ErrorCode {
  // SMILES grammar
  kEmptyInput,
  kUnclosedRing,
  kUnbalancedParenthesis,
  kUnknownToken,
  kInvalidBond,
  // fingerprints / metrics
  kFamilyMismatch,
  kInvalidReference,
  kEmptyCollection,
  kLengthMismatch,
  // GRPO
  kGroupTooSmall,
  kMissingLogProbs,
  // theory
  kUnsupportedZero,
  kInvalidSystem,
  // policies
  kUnknownState,
  kStaleSnapshot,
  kTimeout,
  kHttpStatus,
  kMalformedResponse,
  kAuthMissing,
  kAdapterFailure,
  // io / datasets
  kIoFailure,
  kFormatUnknown,
  kInvalidArgument,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Every domain failure raised by the library. The code names the failure;
/// `what()` carries the human-readable context.
class Error: public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) { }

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

private:
  ErrorCode code_;
};

class HttpStatusError: public Error {
public:
  HttpStatusError(int status, const std::string &message)
      : Error(ErrorCode::kHttpStatus, message), status_(status) { }

  int status() const noexcept { return status_; }

private:
  int status_;
};

}  // namespace rtmol

#endif  // RTMOL_ERROR_H_
