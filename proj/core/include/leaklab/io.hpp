#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>

#include "leaklab/attack.hpp"
#include "leaklab/corpus.hpp"
#include "leaklab/freq_model.hpp"
#include "leaklab/metrics.hpp"
#include "leaklab/sse_sim.hpp"

namespace leaklab {

// Corpus: one document per line, `doc_id TAB space-separated tokens`.
void write_corpus_lines(const std::filesystem::path& path, const Corpus& corpus);

// Universe: one keyword per line, rank order.
void write_universe(const std::filesystem::path& path, const KeywordUniverse& universe);
KeywordUniverse read_universe(const std::filesystem::path& path);

// Frequencies: `k1[,k2[,...]] TAB probability`, '#' starts a comment line.
// Reading validates the sum is within 1e-6 of 1, then renormalizes.
void write_frequency_table(const std::filesystem::path& path, const FrequencyModel& model,
                           const KeywordUniverse& universe);
FrequencyModel read_frequency_table(const std::filesystem::path& path,
                                    const KeywordUniverse& universe);

// Leakage trace: `full_token TAB sterm_token TAB sterm_volume TAB id,id,...`.
std::string trace_to_string(const LeakageTrace& trace);
void write_trace(const std::filesystem::path& path, const LeakageTrace& trace);
LeakageTrace read_trace(const std::filesystem::path& path);

// Ground-truth ledger, consumed only by scoring.
void write_ledger(const std::filesystem::path& path, const GroundTruthLedger& ledger);
GroundTruthLedger read_ledger(const std::filesystem::path& path);

// Workload debug artifact: sorted keyword-index list per query line.
void write_workload(const std::filesystem::path& path, std::span<const Conjunction> queries);

// Recovered mappings (s-term and full-query predictions).
void write_mappings(const std::filesystem::path& path, const StermMapping& sterm,
                    const QueryMapping& full);
std::pair<StermMapping, QueryMapping> read_mappings(const std::filesystem::path& path);

// Attack report: per distinct full token, predicted and true keyword lists
// plus the per-query hit count.
void write_attack_report(const std::filesystem::path& path, const LeakageTrace& trace,
                         const QueryMapping& full, const GroundTruthLedger& ledger);

// Flat key-value rendering of a metrics report.
std::string metrics_to_kv(const MetricsReport& report);
void write_metrics(const std::filesystem::path& path, const MetricsReport& report);

}  // namespace leaklab
