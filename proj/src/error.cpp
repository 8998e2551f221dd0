#include "dda/error.hpp"

namespace dda {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NodeNotFound: return "NodeNotFound";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DegreeTooSmall: return "DegreeTooSmall";
    case Errc::CandidateSetTooLarge: return "CandidateSetTooLarge";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::InvalidProbability: return "InvalidProbability";
    case Errc::InvalidValue: return "InvalidValue";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NoClosedForm: return "NoClosedForm";
    case Errc::InvalidPair: return "InvalidPair";
    case Errc::DegenerateMean: return "DegenerateMean";
    case Errc::DegenerateVariances: return "DegenerateVariances";
    case Errc::DuplicateNode: return "DuplicateNode";
    case Errc::NoRelayingNetwork: return "NoRelayingNetwork";
    case Errc::TooFewNodes: return "TooFewNodes";
    case Errc::EmptyCandidates: return "EmptyCandidates";
    case Errc::UnknownScheme: return "UnknownScheme";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::MissingField: return "MissingField";
    case Errc::NoCommonCells: return "NoCommonCells";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace dda
