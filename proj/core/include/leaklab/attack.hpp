#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "leaklab/aux_knowledge.hpp"
#include "leaklab/freq_model.hpp"
#include "leaklab/observe.hpp"
#include "leaklab/sse_sim.hpp"
#include "leaklab/types.hpp"

namespace leaklab {

/// Output of candidate pruning. Universes are sorted by raw frequency,
/// descending; keywords whose whole universe fell under the threshold keep
/// an empty universe and are flagged.
struct PruneResult {
  std::vector<std::vector<Conjunction>> universes;
  std::vector<std::vector<double>> cand_freq;  // normalized within each universe
  std::vector<std::uint64_t> retained;         // k_i
  std::vector<std::uint64_t> universe_counts;  // m-tilde_i
  std::vector<double> beta;                    // k_i / m-tilde_i (0 when undefined)
  std::vector<double> scaled_combo_norm;       // k_i / total_candidates
  std::vector<bool> empty_flag;
  std::uint64_t total_candidates = 0;          // n_c_eff

  /// Average retention over keywords that can be an s-term at all.
  double mean_beta() const;
};

/// Keeps conjunctions whose raw workload frequency exceeds frac / rho, then
/// renormalizes each per-s-term table over its survivors.
PruneResult prune_candidates(const StermFrequencyKnowledge& knowledge, std::uint64_t rho,
                             double frac);

struct SrecoverParams {
  bool use_volume = true;
  bool use_freq = true;
  bool use_combo = true;
  ComboNorm combo_norm = ComboNorm::pruned_universe;
};

struct StermMapping {
  std::map<TokenId, KeywordId> keyword_of;  // injective over observed s-term tokens
};

/// Negative log-likelihood cost matrix over (keyword, s-term token) solved
/// as an unbalanced linear assignment. Any subset of the three patterns can
/// be enabled; all off is an error.
StermMapping recover_sterms(const ObservationSet& obs, const std::vector<double>& aux_volumes,
                            const StermFrequencyKnowledge& knowledge, const PruneResult& prune,
                            std::uint64_t rho, std::uint64_t n_docs,
                            const SrecoverParams& params);

/// Cost matrix the s-term recovery stage minimizes; exposed for tests that
/// enumerate assignments directly.
Matrix srecover_costs(const ObservationSet& obs, const std::vector<double>& aux_volumes,
                      const StermFrequencyKnowledge& knowledge, const PruneResult& prune,
                      std::uint64_t rho, std::uint64_t n_docs, const SrecoverParams& params);

struct FullRecoverParams {
  int n_iter = 1000;
  double p_free = 0.25;
  bool use_quadratic = true;
  std::uint64_t seed = 0;
};

/// Per-group full query reconstruction: Poisson frequency costs plus
/// binomial volume costs (linear on diagonals, quadratic across pairs),
/// solved with the iterative refinement solver. Returns token ->
/// conjunction for tokens that landed on real candidates.
std::map<TokenId, Conjunction> recover_group(const TokenGroup& group,
                                             std::span<const Conjunction> candidates,
                                             const Matrix& cand_cooccurrence,
                                             std::span<const double> cand_freq,
                                             std::uint64_t n_docs,
                                             const FullRecoverParams& params);

struct AttackParams {
  double frac = 0.6;
  int n_iter = 1000;
  double p_free = 0.25;
  bool use_volume = true;
  bool use_freq = true;
  bool use_combo = true;
  bool use_quadratic = true;
  bool adapt_defense = false;  // apply known-defense corrections
  ComboNorm combo_norm = ComboNorm::pruned_universe;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct StageTimings {
  double knowledge_ms = 0.0;
  double prune_ms = 0.0;
  double observe_ms = 0.0;
  double sterm_ms = 0.0;
  double full_ms = 0.0;
};

struct QueryMapping {
  std::map<TokenId, Conjunction> conjunction_of;
};

struct AttackResult {
  StermMapping sterm;
  QueryMapping full;
  PruneResult prune;
  ObservationSet observations;
  StageTimings timings;
};

/// The full three-stage pipeline: prune candidates (its total feeds the
/// combination-pattern normalization), aggregate observations, recover
/// s-terms, then reconstruct each group. Groups run independently with
/// seeds derived from the group ordinal, so thread count never changes the
/// result. `defense` describes what the client deployed; corrections are
/// applied only when params.adapt_defense is set.
AttackResult run_pipeline(const LeakageTrace& trace, const InvertedIndex& aux_index,
                          const FrequencyModel& attacker_model, const QuerySetting& setting,
                          const DefenseConfig& defense, std::uint64_t n_docs_client,
                          const AttackParams& params);

}  // namespace leaklab
