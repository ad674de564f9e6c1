#include "tabkit/error.hpp"

namespace tabkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateBox: return "DegenerateBox";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::NoTable: return "NoTable";
    case ErrorCode::OverlappingSpan: return "OverlappingSpan";
    case ErrorCode::RaggedTable: return "RaggedTable";
    case ErrorCode::NoRows: return "NoRows";
    case ErrorCode::NoColumns: return "NoColumns";
    case ErrorCode::ZeroExtent: return "ZeroExtent";
    case ErrorCode::MissingLocation: return "MissingLocation";
    case ErrorCode::OversizeForOracle: return "OversizeForOracle";
    case ErrorCode::EmptyEvaluation: return "EmptyEvaluation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingGroundTruth: return "MissingGroundTruth";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnreadableFile: return "UnreadableFile";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::UnsupportedConversion: return "UnsupportedConversion";
  }
  return "Unknown";
}

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::DegenerateBox: return "DegenerateBox";
    case DiagnosticKind::MalformedBox: return "MalformedBox";
    case DiagnosticKind::UnknownClass: return "UnknownClass";
    case DiagnosticKind::OverlappingSpan: return "OverlappingSpan";
    case DiagnosticKind::UncoveredPosition: return "UncoveredPosition";
    case DiagnosticKind::SpanOutOfBounds: return "SpanOutOfBounds";
    case DiagnosticKind::InvalidSpan: return "InvalidSpan";
    case DiagnosticKind::HeaderNotTopPrefix: return "HeaderNotTopPrefix";
    case DiagnosticKind::MixedHeaderRow: return "MixedHeaderRow";
    case DiagnosticKind::ProjectedRowHeaderShape: return "ProjectedRowHeaderShape";
    case DiagnosticKind::ClippedSpan: return "ClippedSpan";
    case DiagnosticKind::NonContiguousSpan: return "NonContiguousSpan";
    case DiagnosticKind::DroppedObject: return "DroppedObject";
    case DiagnosticKind::OutOfRegion: return "OutOfRegion";
    case DiagnosticKind::UnsupportedMarkup: return "UnsupportedMarkup";
  }
  return "Unknown";
}

}  // namespace tabkit
