#pragma once

#include <cstdint>
#include <vector>

#include "tracemc/kernel.hpp"
#include "tracemc/trace.hpp"

namespace tracemc {

struct SampleRecord;

struct MhStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

/// Single-site Metropolis-Hastings step proposing from the prior.
///
/// Picks one address uniformly, redraws it from the distribution recorded at
/// that address, and re-executes the program reusing every other value. The
/// acceptance ratio carries the dimension-jump factor for the variables that
/// appear or disappear plus the forward/reverse prior terms of the moved
/// variable. On rejection `current` is returned untouched.
Trace mh_step(Trace current, const ModelProgram& prog, Chain& chain, MhStats* stats = nullptr);

/// Initializes from the prior and runs MH until `budget` LL-evaluations have
/// been spent, recording one sample after every step.
std::vector<SampleRecord> run_mh(const ModelProgram& prog, std::uint64_t budget,
                                 std::uint64_t seed);

}  // namespace tracemc
