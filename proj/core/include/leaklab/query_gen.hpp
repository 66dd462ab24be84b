#pragma once

#include <cstdint>
#include <vector>

#include "leaklab/freq_model.hpp"
#include "leaklab/types.hpp"

namespace leaklab {

struct WorkloadConfig {
  std::uint64_t rho = 1;
  QuerySetting setting;
  std::uint64_t seed = 0;

  void validate() const {
    if (rho < 1) throw std::invalid_argument("rho must be >= 1");
    setting.validate();
  }
};

/// rho i.i.d. conjunctions. The separate setting draws from the renormalized
/// fixed-dimension slice; hybrid first draws a dimension from P_d, then a
/// conjunction from that slice. Deterministic under cfg.seed.
std::vector<Conjunction> sample_workload(const FrequencyModel& model, const WorkloadConfig& cfg);

}  // namespace leaklab
