// Command line front end: gen / run / sweep / score subcommands over the
// experiment library. Flags mirror the dotted config keys; --set wins over
// the config file.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leaklab/experiment.hpp"
#include "leaklab/io.hpp"

namespace {

using namespace leaklab;

struct CommonOpts {
  std::string config_file;
  std::vector<std::string> sets;
};

ExperimentConfig build_config(const CommonOpts& opts) {
  ExperimentConfig config;
  if (!opts.config_file.empty()) config = load_config_file(opts.config_file);
  for (const auto& kv : opts.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects key=value, got: " + kv);
    apply_config_kv(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return config;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("-c,--config", opts.config_file, "flat key=value config file");
  cmd->add_option("-s,--set", opts.sets, "override one config key (key=value, repeatable)");
}

void print_records(const ExperimentConfig& config, const std::vector<RunRecord>& records,
                   std::ostream& out) {
  for (const auto& record : records) out << record_line(config, {}, record) << '\n';
}

int cmd_gen(const CommonOpts& opts, const std::string& out_dir) {
  ExperimentConfig config = build_config(opts);
  generate_artifacts(config, out_dir);
  std::cout << "wrote corpus.txt, universe.txt, frequencies.txt under " << out_dir << '\n';
  return 0;
}

int cmd_run(const CommonOpts& opts) {
  ExperimentConfig config = build_config(opts);
  std::vector<RunRecord> records = run_repeats(config);
  print_records(config, records, std::cout);
  if (!config.out_dir.empty()) {
    std::ofstream out(std::filesystem::path(config.out_dir) / "records.txt");
    print_records(config, records, out);
  }
  for (const auto& record : records)
    if (record.failed) return 1;
  return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::vector<std::string>& axes,
              const std::string& csv_path) {
  ExperimentConfig config = build_config(opts);
  SweepGrid grid;
  for (const auto& axis : axes) {
    auto eq = axis.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--grid expects key=v1,v2,..., got: " + axis);
    const std::string key = axis.substr(0, eq);
    std::vector<std::string> values;
    std::istringstream iss(axis.substr(eq + 1));
    std::string v;
    while (std::getline(iss, v, ',')) values.push_back(v);
    grid[key] = values;
  }
  std::vector<SweepCell> cells = run_sweep(config, grid);
  const std::string csv = sweep_csv(cells, config.setting().max_dim());
  if (csv_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(csv_path);
    out << csv;
    std::cout << "wrote " << csv_path << '\n';
  }
  for (const auto& cell : cells)
    for (const auto& record : cell.records)
      if (record.failed) {
        std::cerr << "warning: failed cell run: " << record.error << '\n';
      }
  return 0;
}

int cmd_score(const std::string& trace_path, const std::string& ledger_path,
              const std::string& mapping_path, const std::string& setting_kind,
              std::uint32_t dim) {
  LeakageTrace trace = read_trace(trace_path);
  GroundTruthLedger ledger = read_ledger(ledger_path);
  auto [sterm, full] = read_mappings(mapping_path);
  QuerySetting setting = setting_kind == "hybrid" ? QuerySetting::hybrid(dim)
                                                  : QuerySetting::separate(dim);
  MetricsReport report = score(trace, sterm, full, ledger, setting);
  std::cout << metrics_to_kv(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conjunctive-SSE leakage laboratory"};
  app.require_subcommand(1);

  CommonOpts gen_opts, run_opts, sweep_opts;
  std::string gen_out = "out";
  auto* gen = app.add_subcommand("gen", "write corpus / universe / frequency files");
  add_common(gen, gen_opts);
  gen->add_option("-o,--out", gen_out, "output directory");

  auto* run = app.add_subcommand("run", "simulate, attack and score");
  add_common(run, run_opts);

  std::vector<std::string> axes;
  std::string sweep_csv_path;
  auto* sweep = app.add_subcommand("sweep", "grid of runs with aggregated CSV");
  add_common(sweep, sweep_opts);
  sweep->add_option("-g,--grid", axes, "sweep axis key=v1,v2,... (repeatable)")->required();
  sweep->add_option("-o,--out", sweep_csv_path, "CSV output path (stdout when omitted)");

  std::string trace_path, ledger_path, mapping_path, setting_kind = "separate";
  std::uint32_t dim = 2;
  auto* scoring = app.add_subcommand("score", "re-score a saved trace and mapping");
  scoring->add_option("--trace", trace_path)->required();
  scoring->add_option("--ledger", ledger_path)->required();
  scoring->add_option("--mapping", mapping_path)->required();
  scoring->add_option("--setting", setting_kind, "separate or hybrid");
  scoring->add_option("--dim", dim, "query dimension (d or d_max)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_opts, gen_out);
    if (run->parsed()) return cmd_run(run_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, axes, sweep_csv_path);
    if (scoring->parsed()) return cmd_score(trace_path, ledger_path, mapping_path, setting_kind, dim);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
