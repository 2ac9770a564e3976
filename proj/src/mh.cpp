#include "tracemc/mh.hpp"

#include <cmath>
#include <iterator>

#include "tracemc/scheduler.hpp"

namespace tracemc {

Trace initialize_trace(const ModelProgram& prog, Chain& chain, int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Trace t = run_model(prog, chain);
    if (t.possible()) return t;
  }
  throw ImpossibleModelError("no trace with finite likelihood after " +
                             std::to_string(max_attempts) + " prior draws");
}

Trace mh_step(Trace current, const ModelProgram& prog, Chain& chain, MhStats* stats) {
  if (current.choices.empty()) {
    // Nothing latent to move; re-execution still costs one evaluation.
    return run_model(prog, chain, current.choices);
  }
  auto it = std::next(current.choices.begin(),
                      static_cast<std::ptrdiff_t>(chain.rng.index(current.choices.size())));
  const ChoiceRecord& old_rec = it->second;
  double proposed_value = draw(old_rec.dist, chain.rng);

  Trace proposal =
      run_model(prog, chain, current.choices, ForcedChoice{old_rec.address, proposed_value});
  double u = chain.rng.uniform_positive();
  if (stats) ++stats->proposals;
  if (!proposal.possible()) return current;

  const ChoiceRecord& new_rec = proposal.choices.at(old_rec.address);
  double log_alpha = proposal.total_ll - current.total_ll +
                     transdim_correction(current, proposal, old_rec.address) +
                     old_rec.log_prob - new_rec.log_prob;
  if (log_alpha >= 0.0 || std::log(u) < log_alpha) {
    if (stats) ++stats->accepted;
    return proposal;
  }
  return current;
}

std::vector<SampleRecord> run_mh(const ModelProgram& prog, std::uint64_t budget,
                                 std::uint64_t seed) {
  return run_inference(prog, KernelSpec::mh(), budget, seed);
}

}  // namespace tracemc
