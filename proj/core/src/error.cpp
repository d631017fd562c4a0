#include "annodb/error.hpp"

#include <sstream>

namespace annodb {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax: return "SyntaxError";
    case ErrorCode::kUnknownKeyword: return "UnknownKeyword";
    case ErrorCode::kUnknownTable: return "UnknownTable";
    case ErrorCode::kUnknownColumn: return "UnknownColumn";
    case ErrorCode::kUnknownAnnotationTable: return "UnknownAnnotationTable";
    case ErrorCode::kDuplicateTable: return "DuplicateTable";
    case ErrorCode::kDuplicate: return "Duplicate";
    case ErrorCode::kBadColumn: return "BadColumn";
    case ErrorCode::kTypeMismatch: return "TypeMismatch";
    case ErrorCode::kInvalidQuery: return "InvalidQuery";
    case ErrorCode::kCorruptFormat: return "CorruptFormat";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kHeaderMismatch: return "HeaderMismatch";
    case ErrorCode::kRaggedRow: return "RaggedRow";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kSystemTable: return "SystemTable";
    case ErrorCode::kMalformedXml: return "MalformedXML";
    case ErrorCode::kMissingRequiredTag: return "MissingRequiredTag";
    case ErrorCode::kWriterForbidden: return "WriterForbidden";
    case ErrorCode::kEmptyTarget: return "EmptyTarget";
    case ErrorCode::kInvertedRange: return "InvertedRange";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kUnknownProcedure: return "UnknownProcedure";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kUnknownRule: return "UnknownRule";
    case ErrorCode::kProcedureFailure: return "ProcedureFailure";
    case ErrorCode::kMalformedRuns: return "MalformedRuns";
    case ErrorCode::kAlreadyMonitored: return "AlreadyMonitored";
    case ErrorCode::kNotMonitored: return "NotMonitored";
    case ErrorCode::kNotApprover: return "NotApprover";
    case ErrorCode::kNotPending: return "NotPending";
    case ErrorCode::kUnknownOp: return "UnknownOp";
    case ErrorCode::kInverseConflict: return "InverseConflict";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

namespace {

std::string format_syntax(const std::string& message, std::size_t line, std::size_t column,
                          const std::vector<std::string>& expected) {
  std::ostringstream out;
  out << "line " << line << ", column " << column << ": " << message;
  if (!expected.empty()) {
    out << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i != 0) out << (i + 1 == expected.size() ? " or " : ", ");
      out << expected[i];
    }
    out << ")";
  }
  return out.str();
}

}  // namespace

SyntaxError::SyntaxError(std::string message, std::size_t line, std::size_t column,
                         std::vector<std::string> expected, ErrorCode code)
    : Error(code, format_syntax(message, line, column, expected)),
      detail_(std::move(message)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace annodb
