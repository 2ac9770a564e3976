#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "tracemc/trace.hpp"

namespace tracemc {

/// Forward sampling never produced a trace with finite likelihood.
class ImpossibleModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxInitAttempts = 10000;

/// Runs the model from its priors until it yields a trace with finite
/// likelihood. Every attempt consumes one LL-evaluation.
Trace initialize_trace(const ModelProgram& prog, Chain& chain,
                       int max_attempts = kMaxInitAttempts);

}  // namespace tracemc
