#pragma once

#include <cstdlib>
#include <string>

#include "hindreg/bitsupport.hpp"
#include "hindreg/errors.hpp"

namespace hindreg {

// Element bound 2^L for solvers and constructed domains, unless overridden.
inline constexpr unsigned kDefaultBoundLog = 20;
// Largest L that keeps every sum of a handful of elements inside 64 bits.
inline constexpr unsigned kMaxBoundLog = 60;
inline constexpr const char* kBoundLogEnv = "HINDREG_BOUND_LOG";

inline unsigned checked_bound_log(unsigned log) {
  if (log == 0 || log > kMaxBoundLog)
    throw ValidationError("bound log " + std::to_string(log) + " outside [1, " + std::to_string(kMaxBoundLog) + "]");
  return log;
}

// HINDREG_BOUND_LOG when set, else kDefaultBoundLog.
inline unsigned default_bound_log() {
  const char* raw = std::getenv(kBoundLogEnv);
  if (raw == nullptr || *raw == '\0') return kDefaultBoundLog;
  char* end = nullptr;
  const unsigned long v = std::strtoul(raw, &end, 10);
  if (*end != '\0') throw ValidationError(std::string(kBoundLogEnv) + " is not a natural: " + raw);
  return checked_bound_log(static_cast<unsigned>(v));
}

inline Natural default_element_bound() { return pow2(default_bound_log()); }

}  // namespace hindreg
