#include "leaklab/attack.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "leaklab/assign.hpp"
#include "leaklab/rng.hpp"

namespace leaklab {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double binomial_nll(double trials, double observed, double prob) {
  // -[trials*obs*log p + trials*(1-obs)*log(1-p)], p pre-clamped.
  return -(trials * observed * std::log(prob) +
           trials * (1.0 - observed) * std::log1p(-prob));
}

}  // namespace

double PruneResult::mean_beta() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (universe_counts[i] == 0) continue;
    sum += beta[i];
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

PruneResult prune_candidates(const StermFrequencyKnowledge& knowledge, std::uint64_t rho,
                             double frac) {
  if (frac <= 0.0 || frac > 1.0) throw std::invalid_argument("frac must be in (0,1]");
  if (rho < 1) throw std::invalid_argument("rho must be >= 1");
  const double threshold = frac / static_cast<double>(rho);
  const std::size_t n = knowledge.tables.size();

  PruneResult prune;
  prune.universes.resize(n);
  prune.cand_freq.resize(n);
  prune.retained.assign(n, 0);
  prune.universe_counts = knowledge.universe_counts;
  prune.beta.assign(n, 0.0);
  prune.scaled_combo_norm.assign(n, 0.0);
  prune.empty_flag.assign(n, false);

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, Conjunction>> kept;
    for (const auto& [c, p_norm] : knowledge.tables[i]) {
      const double raw = p_norm * knowledge.sterm_freq[i];
      if (raw > threshold) kept.emplace_back(raw, c);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;  // deterministic tie order
    });

    double mass = 0.0;
    for (const auto& [raw, c] : kept) mass += raw;
    for (const auto& [raw, c] : kept) {
      prune.universes[i].push_back(c);
      prune.cand_freq[i].push_back(raw / mass);
    }
    prune.retained[i] = kept.size();
    prune.empty_flag[i] = kept.empty();
    if (knowledge.universe_counts[i] > 0)
      prune.beta[i] = static_cast<double>(kept.size()) /
                      static_cast<double>(knowledge.universe_counts[i]);
    prune.total_candidates += kept.size();
  }

  if (prune.total_candidates > 0) {
    for (std::size_t i = 0; i < n; ++i)
      prune.scaled_combo_norm[i] = static_cast<double>(prune.retained[i]) /
                                   static_cast<double>(prune.total_candidates);
  }
  return prune;
}

Matrix srecover_costs(const ObservationSet& obs, const std::vector<double>& aux_volumes,
                      const StermFrequencyKnowledge& knowledge, const PruneResult& prune,
                      std::uint64_t rho, std::uint64_t n_docs, const SrecoverParams& params) {
  if (!params.use_volume && !params.use_freq && !params.use_combo)
    throw std::invalid_argument("at least one s-term pattern must be enabled");
  const std::size_t n = aux_volumes.size();
  const std::size_t n_s = obs.n_sterm_tokens();
  const double nd = static_cast<double>(n_docs);
  std::uint64_t observed_total = 0;
  for (std::uint64_t m : obs.combo_count) observed_total += m;
  const double combo_trials = params.combo_norm == ComboNorm::pruned_universe
                                  ? static_cast<double>(prune.total_candidates)
                                  : static_cast<double>(observed_total);

  Matrix costs(n, n_s);
  for (std::size_t i = 0; i < n; ++i) {
    const double v_i = clamp_prob(aux_volumes[i]);
    const double sf_i = clamp_prob(knowledge.sterm_freq[i]);
    const double m_i = clamp_prob(prune.scaled_combo_norm[i]);
    for (std::size_t u = 0; u < n_s; ++u) {
      double cost = 0.0;
      if (params.use_freq)
        cost += -static_cast<double>(rho) * obs.sterm_freq[u] * std::log(sf_i);
      if (params.use_volume) cost += binomial_nll(nd, obs.volume[u], v_i);
      if (params.use_combo)
        cost += binomial_nll(combo_trials, obs.combo_count_norm[u], m_i);
      costs(i, u) = cost;
    }
  }
  return costs;
}

StermMapping recover_sterms(const ObservationSet& obs, const std::vector<double>& aux_volumes,
                            const StermFrequencyKnowledge& knowledge, const PruneResult& prune,
                            std::uint64_t rho, std::uint64_t n_docs,
                            const SrecoverParams& params) {
  Matrix costs = srecover_costs(obs, aux_volumes, knowledge, prune, rho, n_docs, params);
  Assignment assignment = solve_lap(costs);
  StermMapping mapping;
  for (std::size_t u = 0; u < obs.n_sterm_tokens(); ++u) {
    if (!assignment.assigned(u)) continue;
    mapping.keyword_of.emplace(obs.sterm_tokens[u],
                               static_cast<KeywordId>(assignment.candidate_of_token[u]));
  }
  return mapping;
}

std::map<TokenId, Conjunction> recover_group(const TokenGroup& group,
                                             std::span<const Conjunction> candidates,
                                             const Matrix& cand_cooccurrence,
                                             std::span<const double> cand_freq,
                                             std::uint64_t n_docs,
                                             const FullRecoverParams& params) {
  std::map<TokenId, Conjunction> mapping;
  if (candidates.empty()) return mapping;
  const std::size_t m = group.full_tokens.size();
  const std::size_t k = candidates.size();
  const double nd = static_cast<double>(n_docs);
  const double rho_u = static_cast<double>(group.total);

  Matrix linear(k, m);
  for (std::size_t g = 0; g < k; ++g) {
    const double f_g = clamp_prob(cand_freq[g]);
    const double vol_g = cand_cooccurrence(g, g);
    for (std::size_t j = 0; j < m; ++j) {
      linear(g, j) = -rho_u * group.freq[j] * std::log(f_g) +
                     binomial_nll(nd, group.volume(j, j), vol_g);
    }
  }

  QuadCost quad;
  if (params.use_quadratic) {
    quad = [&](std::size_t g, std::size_t g2, std::size_t j, std::size_t j2) {
      return binomial_nll(nd, group.volume(j, j2), cand_cooccurrence(g, g2));
    };
  } else {
    quad = [](std::size_t, std::size_t, std::size_t, std::size_t) { return 0.0; };
  }

  Assignment assignment =
      solve_iterative_qap(linear, quad, params.p_free, params.n_iter, params.seed);
  for (std::size_t j = 0; j < m; ++j) {
    if (!assignment.assigned(j)) continue;  // virtual candidate: unrecovered
    mapping.emplace(group.full_tokens[j], candidates[assignment.candidate_of_token[j]]);
  }
  return mapping;
}

AttackResult run_pipeline(const LeakageTrace& trace, const InvertedIndex& aux_index,
                          const FrequencyModel& attacker_model, const QuerySetting& setting,
                          const DefenseConfig& defense, std::uint64_t n_docs_client,
                          const AttackParams& params) {
  defense.validate();
  const bool adapt_clrz =
      params.adapt_defense && defense.kind == DefenseKind::clrz;
  const bool adapt_seal_defense =
      params.adapt_defense && defense.kind == DefenseKind::seal;

  AttackResult result;
  auto t0 = Clock::now();

  // Auxiliary side, defense-aware when requested.
  InvertedIndex adapted_aux;
  const InvertedIndex* aux = &aux_index;
  if (adapt_seal_defense) {
    adapted_aux = adapt_seal(aux_index, defense.x, n_docs_client);
    aux = &adapted_aux;
  }
  std::vector<double> aux_volumes = build_aux_volumes(*aux);
  if (adapt_clrz) aux_volumes = adapt_clrz_volumes(aux_volumes, defense.tpr, defense.fpr);

  StermFrequencyKnowledge knowledge = derive_sterm_frequencies(attacker_model, *aux, setting);
  result.timings.knowledge_ms = ms_since(t0);

  t0 = Clock::now();
  result.prune = prune_candidates(knowledge, trace.size(), params.frac);
  if (result.prune.total_candidates == 0)
    throw std::runtime_error("pruning removed every candidate conjunction");
  result.timings.prune_ms = ms_since(t0);

  t0 = Clock::now();
  result.observations = build_observations(trace, n_docs_client,
                                           result.prune.total_candidates, params.combo_norm);
  result.timings.observe_ms = ms_since(t0);

  t0 = Clock::now();
  SrecoverParams sparams{params.use_volume, params.use_freq, params.use_combo,
                         params.combo_norm};
  result.sterm = recover_sterms(result.observations, aux_volumes, knowledge, result.prune,
                                trace.size(), n_docs_client, sparams);
  result.timings.sterm_ms = ms_since(t0);

  t0 = Clock::now();
  const auto& groups = result.observations.groups;
  std::vector<std::map<TokenId, Conjunction>> group_maps(groups.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t u = next.fetch_add(1);
      if (u >= groups.size()) return;
      const TokenGroup& group = groups[u];
      auto it = result.sterm.keyword_of.find(group.sterm_token);
      if (it == result.sterm.keyword_of.end()) continue;  // token left unmapped
      const KeywordId i = it->second;
      const auto& universe = result.prune.universes[i];
      if (universe.empty()) continue;  // pruned away: group scored unrecovered

      Matrix cooc;
      if (adapt_clrz) {
        CooccurrenceMatrices matrices = build_cooccurrence_matrices(*aux, universe, true);
        cooc = adapt_clrz_cooccurrence(matrices.both, matrices.neither, defense.tpr,
                                       defense.fpr, setting.max_dim());
      } else {
        cooc = build_cooccurrence(*aux, universe);
      }

      FullRecoverParams fparams;
      fparams.n_iter = params.n_iter;
      fparams.p_free = params.p_free;
      fparams.use_quadratic = params.use_quadratic;
      fparams.seed = derive_seed(params.seed, "fullrecover", u);
      group_maps[u] = recover_group(group, universe, cooc, result.prune.cand_freq[i],
                                    n_docs_client, fparams);
    }
  };
  const unsigned n_threads = std::max(1u, params.threads);
  if (n_threads == 1 || groups.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& gm : group_maps)
    result.full.conjunction_of.insert(gm.begin(), gm.end());
  result.timings.full_ms = ms_since(t0);
  return result;
}

}  // namespace leaklab
