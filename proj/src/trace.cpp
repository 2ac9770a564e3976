#include "tracemc/trace.hpp"

#include <cmath>
#include <limits>

namespace tracemc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Thrown when a replayed or forced value scores -inf; the program must not
// keep running on a value outside its prior's support.
struct ImpossibleChoice {};

bool carried_over(const ChoiceRecord& rec, const ChoiceMap& other) {
  auto it = other.find(rec.address);
  return it != other.end() && same_variant(it->second.dist, rec.dist);
}

}  // namespace

std::string to_string(const Address& a) { return a.base + "#" + std::to_string(a.occurrence); }

double ModelContext::sample(std::string_view base, Distribution dist) {
  auto counter = occurrences_.find(base);
  if (counter == occurrences_.end()) counter = occurrences_.emplace(std::string(base), 0).first;
  Address address{std::string(base), counter->second++};

  ChoiceRecord rec{address, std::move(dist), 0.0, 0.0, false};
  if (forced_ && forced_->address == address) {
    rec.value = forced_->value;
  } else if (auto it = reuse_.find(address);
             it != reuse_.end() && same_variant(it->second.dist, rec.dist)) {
    rec.value = it->second.value;
  } else {
    rec.fresh = true;
    bool cached = false;
    if (fresh_cache_ != nullptr) {
      if (auto c = fresh_cache_->find(address);
          c != fresh_cache_->end() && same_variant(c->second.dist, rec.dist)) {
        rec.value = c->second.value;
        cached = true;
      }
    }
    if (!cached) {
      rec.value = draw(rec.dist, chain_.rng);
      if (fresh_cache_ != nullptr) (*fresh_cache_).insert_or_assign(address, rec);
    }
  }
  rec.log_prob = log_prob(rec.dist, rec.value);
  double value = rec.value;
  bool impossible = rec.log_prob == kNegInf;
  trace_.total_ll += rec.log_prob;
  trace_.choices.emplace(std::move(address), std::move(rec));
  if (impossible) throw ImpossibleChoice{};
  return value;
}

void ModelContext::observe(const Distribution& dist, double observed) {
  double lp = log_prob(dist, observed);
  trace_.observes_ll += lp;
  trace_.total_ll += lp;
}

void ModelContext::factor(double log_weight) {
  trace_.observes_ll += log_weight;
  trace_.total_ll += log_weight;
}

void ModelContext::predict(std::string name, PredictValue value) {
  trace_.predicts.insert_or_assign(std::move(name), std::move(value));
}

Trace run_model(const ModelProgram& prog, Chain& chain, const ChoiceMap& reuse,
                const std::optional<ForcedChoice>& forced, ChoiceMap* fresh_cache) {
  ++chain.ll_evaluations;
  ModelContext ctx(chain, reuse, forced, fresh_cache);
  try {
    prog(ctx);
  } catch (const ImpossibleChoice&) {
    ctx.trace_.complete = false;
    ctx.trace_.total_ll = kNegInf;
    return std::move(ctx.trace_);
  }
  // Recompute the total as an explicit sum so the invariant holds exactly.
  double total = ctx.trace_.observes_ll;
  for (const auto& [addr, rec] : ctx.trace_.choices) total += rec.log_prob;
  if (std::isnan(total)) total = kNegInf;
  ctx.trace_.total_ll = total;
  return std::move(ctx.trace_);
}

std::vector<Address> stale_addresses(const Trace& from, const Trace& to) {
  std::vector<Address> out;
  for (const auto& [addr, rec] : from.choices) {
    if (!carried_over(rec, to.choices)) out.push_back(addr);
  }
  return out;
}

std::vector<Address> fresh_addresses(const Trace& from, const Trace& to) {
  return stale_addresses(to, from);
}

double transdim_correction(const Trace& from, const Trace& to,
                           const std::optional<Address>& selected) {
  double p_stale = 0.0;
  for (const auto& [addr, rec] : from.choices) {
    if (selected && addr == *selected) continue;
    if (!carried_over(rec, to.choices)) p_stale += rec.log_prob;
  }
  double p_fresh = 0.0;
  for (const auto& [addr, rec] : to.choices) {
    if (selected && addr == *selected) continue;
    if (!carried_over(rec, from.choices)) p_fresh += rec.log_prob;
  }
  double dims = 0.0;
  if (!from.choices.empty() && !to.choices.empty()) {
    dims = std::log(static_cast<double>(from.choices.size())) -
           std::log(static_cast<double>(to.choices.size()));
  }
  return dims + p_stale - p_fresh;
}

}  // namespace tracemc
