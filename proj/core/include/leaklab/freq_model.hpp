#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "leaklab/types.hpp"

namespace leaklab {

using FreqTable = std::map<Conjunction, double>;

/// Query-frequency knowledge over a conjunction universe. `table` entries
/// are nonnegative; operations producing a model normalize it to sum 1.
/// `epoch` labels the temporal snapshot (weeks of offset from the client's).
struct FrequencyModel {
  std::uint32_t d_max = 1;
  FreqTable table;
  std::int64_t epoch = 0;

  double total_mass() const;
  double at(const Conjunction& c) const;  // 0 when absent
};

/// Singles get Zipf(zipf_s) marginals over index order; every pair gets a
/// long-tailed weight with a sharp head over a seeded random pair ranking.
/// d_max == 1 emits singles only. Output sums to 1.
FrequencyModel gen_synthetic_frequencies(std::size_t universe_size, std::uint32_t d_max,
                                         double zipf_s, std::uint64_t seed);

/// Conditional-independence estimate of one conjunction of dimension 3..5
/// from the lower-dimension entries of `table`, interpreted as event
/// probabilities. Not renormalized. Exact when the keyword events are
/// mutually independent; any zero marginal or zero sub-conjunction forces 0.
double estimate_high_dim_entry(const FreqTable& table, const Conjunction& conj);

/// Fills every conjunction of dimension 3..d_target from singles and pairs
/// via estimate_high_dim_entry, then renormalizes the whole table.
FrequencyModel approximate_high_dim(const FrequencyModel& model, std::uint32_t d_target);

/// The distribution a client under `setting` actually samples from:
/// dimension-k slice renormalized and weighted by P_d(k) (degenerate at d for
/// the separate setting). Errors if an active dimension has zero mass.
FrequencyModel workload_distribution(const FrequencyModel& model, const QuerySetting& setting);

/// Attacker frequency knowledge partitioned by s-term (argmin auxiliary
/// document frequency, ties to the smaller index).
struct StermFrequencyKnowledge {
  std::vector<double> sterm_freq;            // S-tilde-f, sums to 1
  std::vector<FreqTable> tables;             // per keyword, each sums to 1 (or empty)
  std::vector<std::uint64_t> universe_counts;  // m-tilde over the full combination universe
};

/// Partitions the workload distribution of `model` under `setting` by the
/// s-term each conjunction gets under `aux_index` document frequencies.
/// universe_counts covers all combinations of the active dimensions, not
/// just those with observed mass.
StermFrequencyKnowledge derive_sterm_frequencies(const FrequencyModel& model,
                                                 const InvertedIndex& aux_index,
                                                 const QuerySetting& setting);

/// Simulated staleness: Dirichlet resampling around the current entries with
/// concentration shrinking in offset_weeks * drift. Identity when either is 0.
FrequencyModel apply_temporal_offset(const FrequencyModel& model, double offset_weeks,
                                     double drift, std::uint64_t seed);

/// Total variation distance between two models over the union of supports.
double total_variation(const FrequencyModel& a, const FrequencyModel& b);

/// m-tilde for one keyword: the number of conjunctions (over the given
/// dimensions) in which it is the s-term, given how many keywords rank
/// strictly after it in the (doc-frequency, index) order.
std::uint64_t sterm_universe_count(std::uint64_t keywords_after,
                                   const std::vector<std::uint32_t>& dims);

}  // namespace leaklab
