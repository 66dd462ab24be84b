#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "leaklab/attack.hpp"
#include "leaklab/corpus.hpp"
#include "leaklab/metrics.hpp"
#include "leaklab/types.hpp"

namespace leaklab {

/// Everything one run needs. Keys in the flat config format are dotted
/// (corpus.docs, query.rho, ...); see apply_config_kv for the full list.
struct ExperimentConfig {
  // corpus source
  std::string corpus_kind = "synthetic";  // synthetic | lines | dir
  std::string corpus_path;
  SyntheticCorpusSpec synth;
  std::size_t n = 100;  // keyword universe size

  // frequency knowledge
  std::string freq_kind = "synthetic";  // synthetic | file
  std::string freq_path;
  double freq_zipf = 1.0;
  std::uint32_t d_max = 2;     // model dimension; > 2 is approximated
  double offset_weeks = 0.0;   // attacker staleness T
  double drift = 0.01;

  // workload
  std::string setting_kind = "separate";  // separate | hybrid
  std::uint32_t query_dim = 2;
  std::uint32_t query_dmax = 2;
  std::vector<double> pd;  // hybrid P_d; empty = uniform
  std::uint64_t rho = 10000;

  DefenseConfig defense;
  AttackParams attack;

  std::uint64_t seed = 1;
  unsigned repeat = 1;
  unsigned jobs = 1;
  bool sweep_regen_corpus = false;  // fresh corpus per sweep cell
  std::string out_dir;

  QuerySetting setting() const;
  void validate() const;
};

/// Applies one dotted key; throws on unknown keys or bad values.
void apply_config_kv(ExperimentConfig& config, const std::string& key,
                     const std::string& value);

/// `key = value` lines, '#' comments. CLI flags are applied on top.
ExperimentConfig load_config_file(const std::filesystem::path& path);

struct RunRecord {
  std::uint64_t run_seed = 0;
  bool failed = false;
  std::string error;
  MetricsReport metrics;
  StageTimings attack_timings;
  double setup_ms = 0.0;     // corpus + model + index construction
  double simulate_ms = 0.0;  // workload sampling + query answering
  double total_ms = 0.0;
  double mean_beta = 0.0;
};

/// One full generate -> simulate -> attack -> score cycle. Artifacts are
/// exported under out_dir when it is set.
RunRecord run_experiment(const ExperimentConfig& config, std::uint64_t run_seed,
                         const std::filesystem::path& out_dir = {});

/// `repeat` runs with per-run derived seeds, `jobs` at a time. A failing
/// run is recorded and does not abort the batch.
std::vector<RunRecord> run_repeats(const ExperimentConfig& config);

/// Writes corpus/universe/frequency files for the configured generator.
void generate_artifacts(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// One machine-readable line per record: config parameters inlined, then
/// metrics and stage runtimes.
std::string record_line(const ExperimentConfig& config,
                        const std::map<std::string, std::string>& overrides,
                        const RunRecord& record);

using SweepGrid = std::map<std::string, std::vector<std::string>>;

struct SweepCell {
  std::map<std::string, std::string> overrides;
  std::vector<RunRecord> records;
};

/// Cartesian product over the grid; cells and repeats run concurrently up
/// to config.jobs workers. The corpus is shared across cells unless
/// sweep_regen_corpus is set or the cell overrides corpus parameters.
std::vector<SweepCell> run_sweep(const ExperimentConfig& base, const SweepGrid& grid);

/// Aggregated CSV: one row per cell with mean metrics (and stddev columns).
std::string sweep_csv(const std::vector<SweepCell>& cells, std::uint32_t cad_dims);

}  // namespace leaklab
