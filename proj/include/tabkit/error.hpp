#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tabkit {

// Hard failures. Recoverable problems are reported as Diagnostic values instead.
enum class ErrorCode {
  DegenerateBox,
  InvalidGrid,
  NoTable,
  OverlappingSpan,
  RaggedTable,
  NoRows,
  NoColumns,
  ZeroExtent,
  MissingLocation,
  OversizeForOracle,
  EmptyEvaluation,
  InvalidArgument,
  MissingGroundTruth,
  DuplicateId,
  UnreadableFile,
  MalformedInput,
  UnsupportedConversion,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class DiagnosticKind {
  DegenerateBox,
  MalformedBox,
  UnknownClass,
  OverlappingSpan,
  UncoveredPosition,
  SpanOutOfBounds,
  InvalidSpan,
  HeaderNotTopPrefix,
  MixedHeaderRow,
  ProjectedRowHeaderShape,
  ClippedSpan,
  NonContiguousSpan,
  DroppedObject,
  OutOfRegion,
  UnsupportedMarkup,
};

std::string_view to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  // 1-based input line for text parsers; 0 when not tied to a line.
  std::size_t line = 0;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

using Diagnostics = std::vector<Diagnostic>;

}  // namespace tabkit
