#pragma once

#include <cstdint>
#include <vector>

#include "leaklab/sse_sim.hpp"
#include "leaklab/types.hpp"

namespace leaklab {

/// Normalization for the s-term combination counts m*. The default divides
/// by the attacker's post-pruning candidate total so the binomial model uses
/// one trial count on both sides; l1 divides by the observed token total.
enum class ComboNorm { pruned_universe, l1 };

/// Per s-term token aggregates: distinct full tokens in first-appearance
/// order, their frequencies within the group and the normalized pairwise
/// result-volume matrix.
struct TokenGroup {
  TokenId sterm_token = 0;
  std::vector<TokenId> full_tokens;
  std::vector<std::uint64_t> counts;
  std::vector<double> freq;  // f_u, sums to 1
  Matrix volume;             // V_u, symmetric, entries / N_D
  std::uint64_t total = 0;   // rho_u
};

/// Attacker-side view of a leakage trace.
struct ObservationSet {
  std::vector<TokenId> sterm_tokens;       // distinct, first-appearance order
  std::vector<double> volume;              // v, s-term volume / N_D
  std::vector<double> sterm_freq;          // Sf, occurrences / rho
  std::vector<std::uint64_t> combo_count;  // m, distinct full tokens per group
  std::vector<double> combo_count_norm;    // m*
  std::vector<TokenGroup> groups;

  std::size_t n_sterm_tokens() const { return sterm_tokens.size(); }
};

/// One pass over the trace. n_c_eff is the candidate total used to normalize
/// m* in the default mode. Throws if records under one s-term token disagree
/// on the s-term volume (a simulator bug, not an attack condition).
ObservationSet build_observations(const LeakageTrace& trace, std::uint64_t n_docs,
                                  std::uint64_t n_c_eff,
                                  ComboNorm mode = ComboNorm::pruned_universe);

}  // namespace leaklab
