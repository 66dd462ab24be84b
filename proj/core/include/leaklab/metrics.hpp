#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "leaklab/attack.hpp"
#include "leaklab/sse_sim.hpp"
#include "leaklab/types.hpp"

namespace leaklab {

/// Query-weighted accuracy metrics. cad is filled only for separate
/// settings; cad[x-1] is the fraction of queries with at least x keywords
/// recovered, so cad.back() == f_acc there.
struct MetricsReport {
  double s_acc = 0.0;
  double f_acc = 0.0;
  double l_acc = 0.0;
  std::vector<double> cad;

  struct DimSlice {
    std::uint64_t queries = 0;
    double s_acc = 0.0;
    double f_acc = 0.0;
    double l_acc = 0.0;
  };
  std::map<std::uint32_t, DimSlice> per_dimension;

  std::uint64_t total_queries = 0;
  std::uint64_t total_keywords = 0;
};

/// Scores predictions against the sealed ledger over every trace record
/// (repeated tokens count each occurrence). Keyword credit is set
/// intersection between predicted and true conjunctions. Throws when a
/// trace token is missing from the ledger.
MetricsReport score(const LeakageTrace& trace, const StermMapping& sterm_mapping,
                    const QueryMapping& query_mapping, const GroundTruthLedger& ledger,
                    const QuerySetting& setting);

}  // namespace leaklab
