#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ews {

enum class ErrorCode {
  NotHermitian,
  NoConvergence,
  LengthMismatch,
  DimensionMismatch,
  NormViolation,
  RankTooLarge,
  IndexOutOfRange,
  BadParam,
  TraceViolation,
  BadSpectrum,
  BadRank,
  ProductState,
  OptFailed,
  NoConvergedRestart,
  NotPPT,
  FullRank,
  EpsilonVanishes,
  OrthogonalityFail,
  IsPPT,
  BoostDenominatorZero,
  UnknownSuite,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Exception type for every contract violation raised by the library.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace ews
