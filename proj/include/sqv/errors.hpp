#pragma once

#include <stdexcept>
#include <string>

namespace sqv {

/// Failure categories surfaced by the engine. Verification *discrepancies*
/// are reported as data, never as errors; these codes cover malformed
/// inputs and genuinely impossible requests.
enum class ErrorCode {
  NotSymmetric,
  NotPositiveDefinite,
  NegativeTime,
  EmptyGap,
  NonPositiveRate,
  FixedPointAlpha,
  OrphanComponent,
  UnivalentInternal,
  BadPermutation,
  DegreeParityImpossible,
  DartCapExceeded,
  ArityMismatch,
  ExternalCountMismatch,
  NotSpanning,
  Unbounded,
  Diverged,
  ConfigParse,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace sqv
