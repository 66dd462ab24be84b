#include "leaklab/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "leaklab/io.hpp"
#include "leaklab/query_gen.hpp"
#include "leaklab/rng.hpp"

namespace leaklab {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw std::invalid_argument("not a boolean: " + v);
}

std::vector<double> parse_double_list(const std::string& v) {
  std::vector<double> out;
  std::istringstream iss(v);
  std::string part;
  while (std::getline(iss, part, ',')) out.push_back(std::stod(part));
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

QuerySetting ExperimentConfig::setting() const {
  if (setting_kind == "separate") return QuerySetting::separate(query_dim);
  if (setting_kind == "hybrid") return QuerySetting::hybrid(query_dmax, pd);
  throw std::invalid_argument("query.setting must be separate or hybrid");
}

void ExperimentConfig::validate() const {
  if (rho < 1) throw std::invalid_argument("query.rho must be >= 1");
  if (repeat < 1) throw std::invalid_argument("run.repeat must be >= 1");
  if (n < 1) throw std::invalid_argument("universe.n must be >= 1");
  if (d_max < 1 || d_max > 5) throw std::invalid_argument("freq.dmax must be in 1..5");
  if (attack.frac <= 0.0 || attack.frac > 1.0)
    throw std::invalid_argument("attack.frac must be in (0,1]");
  if (attack.p_free <= 0.0 || attack.p_free > 1.0)
    throw std::invalid_argument("attack.pfree must be in (0,1]");
  if (attack.n_iter < 1) throw std::invalid_argument("attack.niter must be >= 1");
  if (corpus_kind != "synthetic" && corpus_kind != "lines" && corpus_kind != "dir")
    throw std::invalid_argument("corpus.kind must be synthetic, lines or dir");
  if (corpus_kind != "synthetic" && corpus_path.empty())
    throw std::invalid_argument("corpus.path required for file corpora");
  if (freq_kind != "synthetic" && freq_kind != "file")
    throw std::invalid_argument("freq.kind must be synthetic or file");
  if (freq_kind == "file" && freq_path.empty())
    throw std::invalid_argument("freq.path required for file frequencies");
  const QuerySetting s = setting();
  s.validate();
  if (s.max_dim() > d_max)
    throw std::invalid_argument("query dimension exceeds freq.dmax");
  defense.validate();
}

void apply_config_kv(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "corpus.kind") c.corpus_kind = value;
  else if (key == "corpus.path") c.corpus_path = value;
  else if (key == "corpus.docs") c.synth.n_docs = std::stoull(value);
  else if (key == "corpus.doc_zipf") c.synth.doc_zipf = std::stod(value);
  else if (key == "corpus.max_rate") c.synth.max_doc_rate = std::stod(value);
  else if (key == "corpus.corr_pairs") c.synth.corr_pairs = std::stoull(value);
  else if (key == "corpus.corr_boost") c.synth.corr_boost = std::stod(value);
  else if (key == "universe.n") c.n = std::stoull(value);
  else if (key == "freq.kind") c.freq_kind = value;
  else if (key == "freq.path") c.freq_path = value;
  else if (key == "freq.zipf") c.freq_zipf = std::stod(value);
  else if (key == "freq.dmax") c.d_max = static_cast<std::uint32_t>(std::stoul(value));
  else if (key == "freq.offset") c.offset_weeks = std::stod(value);
  else if (key == "freq.drift") c.drift = std::stod(value);
  else if (key == "query.setting") c.setting_kind = value;
  else if (key == "query.dim") c.query_dim = static_cast<std::uint32_t>(std::stoul(value));
  else if (key == "query.dmax") c.query_dmax = static_cast<std::uint32_t>(std::stoul(value));
  else if (key == "query.pd") c.pd = parse_double_list(value);
  else if (key == "query.rho") c.rho = std::stoull(value);
  else if (key == "defense.kind") {
    if (value == "none") c.defense.kind = DefenseKind::none;
    else if (value == "clrz") c.defense.kind = DefenseKind::clrz;
    else if (value == "seal") c.defense.kind = DefenseKind::seal;
    else throw std::invalid_argument("defense.kind must be none, clrz or seal");
  }
  else if (key == "defense.tpr") c.defense.tpr = std::stod(value);
  else if (key == "defense.fpr") c.defense.fpr = std::stod(value);
  else if (key == "defense.x") c.defense.x = std::stoull(value);
  else if (key == "attack.frac") c.attack.frac = std::stod(value);
  else if (key == "attack.niter") c.attack.n_iter = std::stoi(value);
  else if (key == "attack.pfree") c.attack.p_free = std::stod(value);
  else if (key == "attack.use_volume") c.attack.use_volume = parse_bool(value);
  else if (key == "attack.use_freq") c.attack.use_freq = parse_bool(value);
  else if (key == "attack.use_combo") c.attack.use_combo = parse_bool(value);
  else if (key == "attack.use_quadratic") c.attack.use_quadratic = parse_bool(value);
  else if (key == "attack.adapt") c.attack.adapt_defense = parse_bool(value);
  else if (key == "attack.combo_norm") {
    if (value == "pruned") c.attack.combo_norm = ComboNorm::pruned_universe;
    else if (value == "l1") c.attack.combo_norm = ComboNorm::l1;
    else throw std::invalid_argument("attack.combo_norm must be pruned or l1");
  }
  else if (key == "attack.threads") c.attack.threads = static_cast<unsigned>(std::stoul(value));
  else if (key == "run.seed") c.seed = std::stoull(value);
  else if (key == "run.repeat") c.repeat = static_cast<unsigned>(std::stoul(value));
  else if (key == "run.jobs") c.jobs = static_cast<unsigned>(std::stoul(value));
  else if (key == "run.out") c.out_dir = value;
  else if (key == "sweep.regen_corpus") c.sweep_regen_corpus = parse_bool(value);
  else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path.string());
  ExperimentConfig config;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + " missing '='");
    apply_config_kv(config, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return config;
}

namespace {

Corpus acquire_corpus(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.corpus_kind == "synthetic") {
    SyntheticCorpusSpec spec = config.synth;
    spec.n_keywords = config.n;
    return generate_synthetic_corpus(spec, seed);
  }
  const CorpusFormat format =
      config.corpus_kind == "lines" ? CorpusFormat::lines : CorpusFormat::directory;
  return ingest_corpus(config.corpus_path, format, config.n);
}

FrequencyModel acquire_model(const ExperimentConfig& config, const KeywordUniverse& universe,
                             std::uint64_t seed) {
  FrequencyModel model;
  if (config.freq_kind == "synthetic") {
    model = gen_synthetic_frequencies(universe.size(), config.d_max, config.freq_zipf, seed);
  } else {
    model = read_frequency_table(config.freq_path, universe);
  }
  if (config.d_max >= 3) model = approximate_high_dim(model, config.d_max);
  return model;
}

}  // namespace

void generate_artifacts(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  const std::uint64_t corpus_seed = derive_seed(config.seed, "experiment.corpus");
  const std::uint64_t freq_seed = derive_seed(config.seed, "experiment.freq");
  Corpus corpus = acquire_corpus(config, corpus_seed);
  FrequencyModel model = acquire_model(config, corpus.universe, freq_seed);
  write_corpus_lines(out_dir / "corpus.txt", corpus);
  write_universe(out_dir / "universe.txt", corpus.universe);
  write_frequency_table(out_dir / "frequencies.txt", model, corpus.universe);
}

RunRecord run_experiment(const ExperimentConfig& config, std::uint64_t run_seed,
                         const std::filesystem::path& out_dir) {
  config.validate();
  RunRecord record;
  record.run_seed = run_seed;
  const auto t_start = Clock::now();

  // Setup: corpus, halves, indexes, models. The corpus and base frequency
  // knowledge depend only on the experiment seed, so sweeps over attack or
  // workload parameters share them across cells.
  auto t0 = Clock::now();
  Corpus corpus = acquire_corpus(config, derive_seed(config.seed, "experiment.corpus"));
  auto [client_docs, attacker_docs] = split_dataset(corpus.documents,
                                                    derive_seed(run_seed, "experiment.split"));
  InvertedIndex client_index = build_index(client_docs, corpus.universe);
  InvertedIndex aux_index = build_index(attacker_docs, corpus.universe);
  FrequencyModel model =
      acquire_model(config, corpus.universe, derive_seed(config.seed, "experiment.freq"));
  FrequencyModel attacker_model = apply_temporal_offset(
      model, config.offset_weeks, config.drift, derive_seed(run_seed, "experiment.offset"));
  InvertedIndex edb =
      setup_edb(client_index, config.defense, derive_seed(run_seed, "experiment.defense"));
  record.setup_ms = ms_since(t0);

  // Simulate the client's workload against the (possibly defended) index.
  t0 = Clock::now();
  WorkloadConfig workload_config;
  workload_config.rho = config.rho;
  workload_config.setting = config.setting();
  workload_config.seed = derive_seed(run_seed, "experiment.workload");
  std::vector<Conjunction> workload = sample_workload(model, workload_config);
  LeakageSimulator simulator(std::move(edb));
  LeakageTrace trace;
  trace.reserve(workload.size());
  for (const auto& q : workload) trace.push_back(simulator.answer_query(q));
  record.simulate_ms = ms_since(t0);

  AttackParams attack_params = config.attack;
  attack_params.seed = derive_seed(run_seed, "experiment.attack");
  AttackResult attack = run_pipeline(trace, aux_index, attacker_model, config.setting(),
                                     config.defense, client_index.n_docs, attack_params);
  record.attack_timings = attack.timings;
  record.mean_beta = attack.prune.mean_beta();

  record.metrics = score(trace, attack.sterm, attack.full, simulator.ledger(), config.setting());
  record.total_ms = ms_since(t_start);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_trace(out_dir / "trace.txt", trace);
    write_ledger(out_dir / "ledger.txt", simulator.ledger());
    write_workload(out_dir / "workload.txt", workload);
    write_mappings(out_dir / "mapping.txt", attack.sterm, attack.full);
    write_attack_report(out_dir / "report.txt", trace, attack.full, simulator.ledger());
    write_metrics(out_dir / "metrics.txt", record.metrics);
  }
  return record;
}

std::vector<RunRecord> run_repeats(const ExperimentConfig& config) {
  config.validate();
  std::vector<RunRecord> records(config.repeat);
  std::atomic<unsigned> next{0};
  auto worker = [&] {
    for (;;) {
      const unsigned r = next.fetch_add(1);
      if (r >= config.repeat) return;
      const std::uint64_t run_seed = derive_seed(config.seed, "run", r);
      std::filesystem::path out;
      if (!config.out_dir.empty())
        out = std::filesystem::path(config.out_dir) / ("run" + std::to_string(r));
      try {
        records[r] = run_experiment(config, run_seed, out);
      } catch (const std::exception& e) {
        records[r].run_seed = run_seed;
        records[r].failed = true;
        records[r].error = e.what();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min(config.jobs, config.repeat));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

std::string record_line(const ExperimentConfig& config,
                        const std::map<std::string, std::string>& overrides,
                        const RunRecord& record) {
  std::ostringstream out;
  out << "n=" << config.n << " dmax=" << config.d_max << " setting=" << config.setting_kind
      << " dim=" << (config.setting_kind == "separate" ? config.query_dim : config.query_dmax)
      << " rho=" << config.rho << " defense=";
  switch (config.defense.kind) {
    case DefenseKind::none: out << "none"; break;
    case DefenseKind::clrz: out << "clrz(" << config.defense.tpr << ',' << config.defense.fpr << ')'; break;
    case DefenseKind::seal: out << "seal(x=" << config.defense.x << ')'; break;
  }
  out << " frac=" << config.attack.frac << " niter=" << config.attack.n_iter
      << " pfree=" << config.attack.p_free << " adapt=" << (config.attack.adapt_defense ? 1 : 0)
      << " T=" << config.offset_weeks << " seed=" << record.run_seed;
  for (const auto& [k, v] : overrides) out << ' ' << k << '=' << v;
  if (record.failed) {
    out << " failed=1 error=\"" << record.error << '"';
    return out.str();
  }
  out << " s_acc=" << record.metrics.s_acc << " f_acc=" << record.metrics.f_acc
      << " l_acc=" << record.metrics.l_acc;
  for (std::size_t x = 0; x < record.metrics.cad.size(); ++x)
    out << " cad_" << (x + 1) << '=' << record.metrics.cad[x];
  out << " mean_beta=" << record.mean_beta << " setup_ms=" << record.setup_ms
      << " simulate_ms=" << record.simulate_ms
      << " knowledge_ms=" << record.attack_timings.knowledge_ms
      << " prune_ms=" << record.attack_timings.prune_ms
      << " observe_ms=" << record.attack_timings.observe_ms
      << " sterm_ms=" << record.attack_timings.sterm_ms
      << " full_ms=" << record.attack_timings.full_ms << " total_ms=" << record.total_ms;
  return out.str();
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& base, const SweepGrid& grid) {
  base.validate();
  // Cartesian product, keys in map order.
  std::vector<SweepCell> cells;
  cells.emplace_back();
  for (const auto& [key, values] : grid) {
    if (values.empty()) throw std::invalid_argument("empty sweep axis: " + key);
    std::vector<SweepCell> expanded;
    for (const auto& cell : cells) {
      for (const auto& value : values) {
        SweepCell next = cell;
        next.overrides[key] = value;
        expanded.push_back(std::move(next));
      }
    }
    cells.swap(expanded);
  }

  struct Task {
    std::size_t cell;
    unsigned repeat;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    cells[c].records.resize(base.repeat);
    for (unsigned r = 0; r < base.repeat; ++r) tasks.push_back({c, r});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task task = tasks[t];
      SweepCell& cell = cells[task.cell];
      ExperimentConfig config = base;
      config.out_dir.clear();  // cells report through records, not files
      bool touches_corpus = false;
      try {
        for (const auto& [k, v] : cell.overrides) {
          apply_config_kv(config, k, v);
          if (k.rfind("corpus.", 0) == 0 || k == "universe.n") touches_corpus = true;
        }
        const std::uint64_t ordinal =
            (base.sweep_regen_corpus || touches_corpus)
                ? task.cell * 10000ULL + task.repeat
                : task.repeat;
        const char* label =
            (base.sweep_regen_corpus || touches_corpus) ? "sweep-cell" : "run";
        const std::uint64_t run_seed = derive_seed(config.seed, label, ordinal);
        cell.records[task.repeat] = run_experiment(config, run_seed);
      } catch (const std::exception& e) {
        cell.records[task.repeat].failed = true;
        cell.records[task.repeat].error = e.what();
      }
    }
  };
  const unsigned jobs = std::max(1u, base.jobs);
  if (jobs == 1 || tasks.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, tasks.size()); ++t)
      pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells, std::uint32_t cad_dims) {
  std::ostringstream out;
  // Header: swept params first, then the aggregated metrics.
  std::vector<std::string> keys;
  if (!cells.empty())
    for (const auto& [k, v] : cells.front().overrides) keys.push_back(k);
  for (const auto& k : keys) out << k << ',';
  out << "s_acc,f_acc,l_acc";
  for (std::uint32_t x = 1; x <= cad_dims; ++x) out << ",cad_" << x;
  out << ",runtime_ms,s_acc_std,f_acc_std,l_acc_std,runtime_ms_std,mean_beta,failures\n";

  for (const auto& cell : cells) {
    for (const auto& k : keys) out << cell.overrides.at(k) << ',';
    std::vector<const RunRecord*> ok;
    for (const auto& r : cell.records)
      if (!r.failed) ok.push_back(&r);
    auto mean_std = [&](auto&& get) -> std::pair<double, double> {
      if (ok.empty()) return {0.0, 0.0};
      double mean = 0.0;
      for (const auto* r : ok) mean += get(*r);
      mean /= static_cast<double>(ok.size());
      double var = 0.0;
      for (const auto* r : ok) var += (get(*r) - mean) * (get(*r) - mean);
      var /= static_cast<double>(ok.size());
      return {mean, std::sqrt(var)};
    };
    auto [s_mean, s_std] = mean_std([](const RunRecord& r) { return r.metrics.s_acc; });
    auto [f_mean, f_std] = mean_std([](const RunRecord& r) { return r.metrics.f_acc; });
    auto [l_mean, l_std] = mean_std([](const RunRecord& r) { return r.metrics.l_acc; });
    auto [t_mean, t_std] = mean_std([](const RunRecord& r) { return r.total_ms; });
    auto [b_mean, b_std] = mean_std([](const RunRecord& r) { return r.mean_beta; });
    out << s_mean << ',' << f_mean << ',' << l_mean;
    for (std::uint32_t x = 1; x <= cad_dims; ++x) {
      auto [c_mean, c_std] = mean_std([x](const RunRecord& r) {
        return x <= r.metrics.cad.size() ? r.metrics.cad[x - 1] : 0.0;
      });
      out << ',' << c_mean;
    }
    out << ',' << t_mean << ',' << s_std << ',' << f_std << ',' << l_std << ',' << t_std << ','
        << b_mean << ',' << (cell.records.size() - ok.size()) << '\n';
  }
  return out.str();
}

}  // namespace leaklab
