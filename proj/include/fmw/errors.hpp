// Error taxonomy shared by all modules. One exception class with a code so
// callers (and the CLI exit-code mapping) can dispatch without string matching.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace fmw {

// Half-open byte range into the original source text, plus 1-based line/column
// of the range start for human-readable messages.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int column = 1;
};

enum class ErrorCode {
  ArityClash,
  SyntaxError,
  EqualityForbidden,
  FreeVariableInSentence,
  TupleOutOfRange,
  ArityMismatch,
  SignatureMismatch,
  SignatureNotContained,
  VocabularyNotContained,
  UnboundVariable,
  EqualityFreeUnsupported,
  EqualityPresent,
  TargetTooSmall,
  DomainMismatch,
  InvalidConfig,
  NotPropositional,
  TooManyVariables,
  TooManySharedVariables,
  NotPureEquality,
  PredicateUnknown,
  ResourceBudgetExceeded,
  UnknownRepro,
  UsageError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Error(ErrorCode code, std::string message, SourceSpan span)
      : std::runtime_error(std::move(message)), code_(code), span_(span) {}

  ErrorCode code() const { return code_; }
  const std::optional<SourceSpan>& span() const { return span_; }

 private:
  ErrorCode code_;
  std::optional<SourceSpan> span_;
};

}  // namespace fmw
