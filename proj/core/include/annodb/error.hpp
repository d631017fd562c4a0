#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace annodb {

enum class ErrorCode {
  kSyntax,
  kUnknownKeyword,
  kUnknownTable,
  kUnknownColumn,
  kUnknownAnnotationTable,
  kDuplicateTable,
  kDuplicate,
  kBadColumn,
  kTypeMismatch,
  kInvalidQuery,
  kCorruptFormat,
  kVersionMismatch,
  kHeaderMismatch,
  kRaggedRow,
  kIo,
  kSystemTable,
  kMalformedXml,
  kMissingRequiredTag,
  kWriterForbidden,
  kEmptyTarget,
  kInvertedRange,
  kCycleDetected,
  kUnknownProcedure,
  kArityMismatch,
  kUnknownRule,
  kProcedureFailure,
  kMalformedRuns,
  kAlreadyMonitored,
  kNotMonitored,
  kNotApprover,
  kNotPending,
  kUnknownOp,
  kInverseConflict,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the A-SQL front-end. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, std::size_t line, std::size_t column,
              std::vector<std::string> expected, ErrorCode code = ErrorCode::kSyntax);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

  // Index of the failing statement within a script; 0 for single statements.
  std::size_t statement_index() const noexcept { return statement_index_; }
  void set_statement_index(std::size_t index) noexcept { statement_index_ = index; }

  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
  std::size_t statement_index_ = 0;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace annodb
