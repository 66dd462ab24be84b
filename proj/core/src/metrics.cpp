#include "leaklab/metrics.hpp"

#include <stdexcept>

namespace leaklab {

namespace {

std::size_t shared_keywords(const Conjunction& a, const Conjunction& b) {
  std::size_t hits = 0;
  for (KeywordId k : a.keyword_ids())
    if (b.contains(k)) ++hits;
  return hits;
}

}  // namespace

MetricsReport score(const LeakageTrace& trace, const StermMapping& sterm_mapping,
                    const QueryMapping& query_mapping, const GroundTruthLedger& ledger,
                    const QuerySetting& setting) {
  MetricsReport report;
  report.total_queries = trace.size();

  const bool with_cad = setting.kind == QuerySetting::Kind::separate;
  std::vector<std::uint64_t> cad_counts(with_cad ? setting.dim : 0, 0);

  std::uint64_t s_hits = 0, f_hits = 0, keyword_hits = 0;
  struct DimAcc {
    std::uint64_t queries = 0, s = 0, f = 0, kw_hits = 0, kw_total = 0;
  };
  std::map<std::uint32_t, DimAcc> dims;

  for (const auto& record : trace) {
    auto truth_it = ledger.conjunction_of.find(record.token.full_token);
    if (truth_it == ledger.conjunction_of.end())
      throw std::runtime_error("trace token missing from ledger");
    auto sterm_it = ledger.sterm_keyword_of.find(record.token.sterm_token);
    if (sterm_it == ledger.sterm_keyword_of.end())
      throw std::runtime_error("s-term token missing from ledger");
    const Conjunction& truth = truth_it->second;
    report.total_keywords += truth.dim();

    DimAcc& dim = dims[static_cast<std::uint32_t>(truth.dim())];
    ++dim.queries;
    dim.kw_total += truth.dim();

    auto sp = sterm_mapping.keyword_of.find(record.token.sterm_token);
    if (sp != sterm_mapping.keyword_of.end() && sp->second == sterm_it->second) {
      ++s_hits;
      ++dim.s;
    }

    std::size_t hits = 0;
    bool full = false;
    auto pred = query_mapping.conjunction_of.find(record.token.full_token);
    if (pred != query_mapping.conjunction_of.end()) {
      hits = shared_keywords(truth, pred->second);
      full = pred->second == truth;
    }
    keyword_hits += hits;
    dim.kw_hits += hits;
    if (full) {
      ++f_hits;
      ++dim.f;
    }
    if (with_cad)
      for (std::size_t x = 0; x < cad_counts.size(); ++x)
        if (hits >= x + 1) ++cad_counts[x];
  }

  const double q = static_cast<double>(report.total_queries);
  if (report.total_queries > 0) {
    report.s_acc = static_cast<double>(s_hits) / q;
    report.f_acc = static_cast<double>(f_hits) / q;
  }
  if (report.total_keywords > 0)
    report.l_acc = static_cast<double>(keyword_hits) / static_cast<double>(report.total_keywords);
  for (std::uint64_t c : cad_counts) report.cad.push_back(static_cast<double>(c) / q);

  for (const auto& [d, acc] : dims) {
    MetricsReport::DimSlice slice;
    slice.queries = acc.queries;
    slice.s_acc = static_cast<double>(acc.s) / static_cast<double>(acc.queries);
    slice.f_acc = static_cast<double>(acc.f) / static_cast<double>(acc.queries);
    slice.l_acc = acc.kw_total == 0
                      ? 0.0
                      : static_cast<double>(acc.kw_hits) / static_cast<double>(acc.kw_total);
    report.per_dimension.emplace(d, slice);
  }
  return report;
}

}  // namespace leaklab
