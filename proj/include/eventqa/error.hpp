// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eventqa {

enum class ErrorCode {
  InvalidArgument,
  InvalidEventId,
  DuplicateEventId,
  DanglingEdge,
  NodeNotFound,
  UnknownNode,
  MissingBlock,
  MalformedObject,
  UnknownRelationKind,
  SyntaxError,
  UnknownTraversal,
  UnboundVariable,
  MissingSlot,
  UnknownPlaceholder,
  UnmatchedInvocation,
  UninterpretableYesNo,
  TransportError,
  NonSuccessStatus,
  MalformedResponseBody,
  OracleFailure,
  BudgetExhausted,
  DensifyFailed,
  RecordInvalid,
  IoFailure,
  IdMismatch,
  ConfigInvalid,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eventqa
