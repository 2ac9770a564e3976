#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tracemc/distributions.hpp"
#include "tracemc/random.hpp"

namespace tracemc {

/// Identity of a random choice: the site name given by the model plus how many
/// times that name had already been visited in the same execution.
struct Address {
  std::string base;
  std::uint32_t occurrence = 0;

  auto operator<=>(const Address&) const = default;
};

std::string to_string(const Address& a);

struct ChoiceRecord {
  Address address;
  Distribution dist;  // parameters in force during the execution that produced it
  double value = 0.0;
  double log_prob = 0.0;
  bool fresh = false;  // drawn in this execution rather than taken from the reuse database
};

using ChoiceMap = std::map<Address, ChoiceRecord>;

using PredictValue = std::variant<double, std::vector<double>>;
using Predicts = std::map<std::string, PredictValue, std::less<>>;

/// One execution of a model program.
struct Trace {
  ChoiceMap choices;
  double observes_ll = 0.0;
  Predicts predicts;
  double total_ll = 0.0;
  /// False when execution stopped early because a latent choice scored -inf.
  bool complete = true;

  std::size_t dimension() const { return choices.size(); }
  bool possible() const { return total_ll > -std::numeric_limits<double>::infinity(); }
};

/// Per-chain state: the random stream and the count of trace-likelihood
/// evaluations (model executions) performed so far.
struct Chain {
  explicit Chain(std::uint64_t seed) : rng(seed) {}

  Rng rng;
  std::uint64_t ll_evaluations = 0;
};

class ModelContext;

/// A model is a host function over the context handle. It must be
/// deterministic given the values returned by sample().
using ModelProgram = std::function<void(ModelContext&)>;

struct ForcedChoice {
  Address address;
  double value;
};

class ModelContext {
 public:
  ModelContext(const ModelContext&) = delete;
  ModelContext& operator=(const ModelContext&) = delete;

  /// Latent random choice at site `base`. Reuses the stored value when the
  /// reuse database holds this address with the same distribution variant;
  /// otherwise draws from `dist`.
  double sample(std::string_view base, Distribution dist);

  /// Conditions on `observed` having been drawn from `dist`.
  void observe(const Distribution& dist, double observed);

  /// Adds an arbitrary log-likelihood term (e.g. -inf for an impossible branch).
  void factor(double log_weight);

  void predict(std::string name, PredictValue value);

 private:
  friend Trace run_model(const ModelProgram&, Chain&, const ChoiceMap&,
                         const std::optional<ForcedChoice>&, ChoiceMap*);

  ModelContext(Chain& chain, const ChoiceMap& reuse, const std::optional<ForcedChoice>& forced,
               ChoiceMap* fresh_cache)
      : chain_(chain), reuse_(reuse), forced_(forced), fresh_cache_(fresh_cache) {}

  Chain& chain_;
  const ChoiceMap& reuse_;
  const std::optional<ForcedChoice>& forced_;
  ChoiceMap* fresh_cache_;
  std::map<std::string, std::uint32_t, std::less<>> occurrences_;
  Trace trace_;
};

/// Executes `prog` once and returns its trace. Values found in `reuse` are
/// replayed; `forced` pins one address to a given value (scored, not drawn).
/// When `fresh_cache` is given, fresh draws are looked up there first and
/// stored there afterwards, so repeated executions within one kernel move see
/// consistent values for variables absent from `reuse`.
///
/// Increments chain.ll_evaluations by exactly one.
Trace run_model(const ModelProgram& prog, Chain& chain, const ChoiceMap& reuse = {},
                const std::optional<ForcedChoice>& forced = std::nullopt,
                ChoiceMap* fresh_cache = nullptr);

/// Addresses whose record exists in `from` but not in `to` (or exists with a
/// different distribution variant, in which case it was redrawn).
std::vector<Address> stale_addresses(const Trace& from, const Trace& to);

/// Addresses whose record in `to` was not carried over from `from`.
std::vector<Address> fresh_addresses(const Trace& from, const Trace& to);

/// Log dimension-jump factor for a move from `from` to `to`:
///   log|D| + log p_stale - log|D'| - log p_fresh
/// with the moved address excluded from both the stale and fresh sets.
double transdim_correction(const Trace& from, const Trace& to,
                           const std::optional<Address>& selected = std::nullopt);

}  // namespace tracemc
