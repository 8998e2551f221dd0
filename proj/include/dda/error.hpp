// Error type shared by every module of the library.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dda {

enum class Errc {
  NodeNotFound,
  DimensionMismatch,
  DegreeTooSmall,
  CandidateSetTooLarge,
  EmptyInput,
  InvalidProbability,
  InvalidValue,
  IndexOutOfRange,
  NoClosedForm,
  InvalidPair,
  DegenerateMean,
  DegenerateVariances,
  DuplicateNode,
  NoRelayingNetwork,
  TooFewNodes,
  EmptyCandidates,
  UnknownScheme,
  UnknownKey,
  MissingField,
  NoCommonCells,
  ParseError,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dda
