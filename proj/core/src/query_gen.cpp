#include "leaklab/query_gen.hpp"

#include "leaklab/rng.hpp"

namespace leaklab {

namespace {

struct DimSlice {
  std::vector<Conjunction> entries;
  std::vector<double> cdf;  // inclusive prefix sums
};

DimSlice build_slice(const FrequencyModel& model, std::uint32_t dim) {
  DimSlice slice;
  double acc = 0.0;
  for (const auto& [c, p] : model.table) {
    if (c.dim() != dim || p <= 0.0) continue;
    acc += p;
    slice.entries.push_back(c);
    slice.cdf.push_back(acc);
  }
  if (slice.entries.empty())
    throw std::runtime_error("requested dimension has zero total mass: d=" + std::to_string(dim));
  return slice;
}

}  // namespace

std::vector<Conjunction> sample_workload(const FrequencyModel& model, const WorkloadConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, "workload"));
  std::vector<Conjunction> queries;
  queries.reserve(cfg.rho);

  if (cfg.setting.kind == QuerySetting::Kind::separate) {
    DimSlice slice = build_slice(model, cfg.setting.dim);
    for (std::uint64_t q = 0; q < cfg.rho; ++q)
      queries.push_back(slice.entries[rng.discrete_from_cdf(slice.cdf)]);
    return queries;
  }

  // hybrid: dimension first, then the slice.
  std::vector<DimSlice> slices(cfg.setting.d_max + 1);
  for (std::uint32_t d : cfg.setting.active_dims()) slices[d] = build_slice(model, d);
  std::vector<double> dim_cdf(cfg.setting.d_max);
  double acc = 0.0;
  for (std::uint32_t d = 1; d <= cfg.setting.d_max; ++d) {
    acc += cfg.setting.dim_probs[d - 1];
    dim_cdf[d - 1] = acc;
  }
  for (std::uint64_t q = 0; q < cfg.rho; ++q) {
    std::uint32_t d = static_cast<std::uint32_t>(rng.discrete_from_cdf(dim_cdf)) + 1;
    const DimSlice& slice = slices[d];
    queries.push_back(slice.entries[rng.discrete_from_cdf(slice.cdf)]);
  }
  return queries;
}

}  // namespace leaklab
