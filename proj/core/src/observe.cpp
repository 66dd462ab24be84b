#include "leaklab/observe.hpp"

#include <map>
#include <stdexcept>

namespace leaklab {

ObservationSet build_observations(const LeakageTrace& trace, std::uint64_t n_docs,
                                  std::uint64_t n_c_eff, ComboNorm mode) {
  if (trace.empty()) throw std::invalid_argument("empty leakage trace");
  if (n_docs == 0) throw std::invalid_argument("n_docs must be > 0");
  if (n_c_eff == 0) throw std::invalid_argument("n_c_eff must be > 0");

  ObservationSet obs;
  std::map<TokenId, std::size_t> group_of;       // sterm token -> group slot
  std::vector<std::map<TokenId, std::size_t>> member_of;  // full token -> slot in group
  std::vector<std::vector<const LeakageRecord*>> exemplar;  // one record per full token
  std::vector<std::uint64_t> sterm_count;

  for (const auto& record : trace) {
    auto [it, inserted] = group_of.emplace(record.token.sterm_token, obs.groups.size());
    if (inserted) {
      obs.sterm_tokens.push_back(record.token.sterm_token);
      obs.volume.push_back(static_cast<double>(record.sterm_volume) /
                           static_cast<double>(n_docs));
      obs.groups.emplace_back();
      obs.groups.back().sterm_token = record.token.sterm_token;
      member_of.emplace_back();
      exemplar.emplace_back();
      sterm_count.push_back(0);
    }
    const std::size_t u = it->second;
    const double v = static_cast<double>(record.sterm_volume) / static_cast<double>(n_docs);
    if (v != obs.volume[u])
      throw std::runtime_error("records disagree on s-term volume for one token");
    ++sterm_count[u];

    TokenGroup& group = obs.groups[u];
    auto [mit, fresh] = member_of[u].emplace(record.token.full_token, group.full_tokens.size());
    if (fresh) {
      group.full_tokens.push_back(record.token.full_token);
      group.counts.push_back(0);
      exemplar[u].push_back(&record);
    }
    ++group.counts[mit->second];
  }

  const double rho = static_cast<double>(trace.size());
  std::uint64_t total_distinct = 0;
  for (std::size_t u = 0; u < obs.groups.size(); ++u) {
    TokenGroup& group = obs.groups[u];
    group.total = sterm_count[u];
    obs.sterm_freq.push_back(static_cast<double>(sterm_count[u]) / rho);
    obs.combo_count.push_back(group.full_tokens.size());
    total_distinct += group.full_tokens.size();

    const std::size_t m = group.full_tokens.size();
    group.freq.resize(m);
    for (std::size_t j = 0; j < m; ++j)
      group.freq[j] = static_cast<double>(group.counts[j]) / static_cast<double>(group.total);

    group.volume = Matrix(m, m);
    for (std::size_t j = 0; j < m; ++j) {
      const auto& rj = exemplar[u][j]->results();
      group.volume(j, j) = static_cast<double>(rj.size()) / static_cast<double>(n_docs);
      for (std::size_t j2 = j + 1; j2 < m; ++j2) {
        const auto& rk = exemplar[u][j2]->results();
        double shared = static_cast<double>(intersection_size(rj, rk)) /
                        static_cast<double>(n_docs);
        group.volume(j, j2) = shared;
        group.volume(j2, j) = shared;
      }
    }
  }

  const double denom = mode == ComboNorm::pruned_universe
                           ? static_cast<double>(n_c_eff)
                           : static_cast<double>(total_distinct);
  for (std::uint64_t m : obs.combo_count)
    obs.combo_count_norm.push_back(static_cast<double>(m) / denom);
  return obs;
}

}  // namespace leaklab
