#include "leaklab/freq_model.hpp"

#include <cmath>

#include "leaklab/rng.hpp"

namespace leaklab {

namespace {

void normalize(FreqTable& table) {
  double sum = 0.0;
  for (const auto& [c, p] : table) sum += p;
  if (sum <= 0.0) throw std::runtime_error("frequency table has zero mass");
  for (auto& [c, p] : table) p /= sum;
}

double lookup(const FreqTable& table, const Conjunction& c) {
  auto it = table.find(c);
  return it == table.end() ? 0.0 : it->second;
}

}  // namespace

double FrequencyModel::total_mass() const {
  double sum = 0.0;
  for (const auto& [c, p] : table) sum += p;
  return sum;
}

double FrequencyModel::at(const Conjunction& c) const { return lookup(table, c); }

FrequencyModel gen_synthetic_frequencies(std::size_t universe_size, std::uint32_t d_max,
                                         double zipf_s, std::uint64_t seed) {
  if (universe_size < 1) throw std::invalid_argument("universe_size must be >= 1");
  if (d_max < 1) throw std::invalid_argument("d_max must be >= 1");
  if (zipf_s <= 0.0) throw std::invalid_argument("zipf_s must be > 0");

  FrequencyModel model;
  const bool with_pairs = d_max >= 2 && universe_size >= 2;
  model.d_max = with_pairs ? 2 : 1;

  const double single_share = with_pairs ? 0.35 : 1.0;
  double single_norm = 0.0;
  std::vector<double> single(universe_size);
  for (std::size_t i = 0; i < universe_size; ++i) {
    single[i] = 1.0 / std::pow(static_cast<double>(i + 1), zipf_s);
    single_norm += single[i];
  }
  for (std::size_t i = 0; i < universe_size; ++i)
    model.table.emplace(Conjunction{static_cast<KeywordId>(i)},
                        single_share * single[i] / single_norm);

  if (with_pairs) {
    // Random pair ranking with power-law weights; exponent < 1 keeps the
    // head near 1e-2 for universes in the hundreds while staying long-tailed.
    std::vector<Conjunction> pairs;
    pairs.reserve(universe_size * (universe_size - 1) / 2);
    for (std::size_t i = 0; i < universe_size; ++i)
      for (std::size_t j = i + 1; j < universe_size; ++j)
        pairs.push_back(Conjunction{static_cast<KeywordId>(i), static_cast<KeywordId>(j)});
    Rng rng(derive_seed(seed, "freq.pairs"));
    rng.shuffle(pairs);

    const double pair_exponent = 0.85;
    double pair_norm = 0.0;
    std::vector<double> weight(pairs.size());
    for (std::size_t r = 0; r < pairs.size(); ++r) {
      weight[r] = 1.0 / std::pow(static_cast<double>(r + 1), pair_exponent);
      pair_norm += weight[r];
    }
    for (std::size_t r = 0; r < pairs.size(); ++r)
      model.table.emplace(pairs[r], (1.0 - single_share) * weight[r] / pair_norm);
  }

  normalize(model.table);
  return model;
}

double estimate_high_dim_entry(const FreqTable& table, const Conjunction& conj) {
  const auto ids = conj.keyword_ids();
  switch (conj.dim()) {
    case 1:
    case 2:
      return lookup(table, conj);
    case 3: {
      // Product of pairwise conditionals around the cycle; exact under
      // independence and zero whenever any pair inside is zero.
      double pa = lookup(table, Conjunction{ids[0]});
      double pb = lookup(table, Conjunction{ids[1]});
      double pc = lookup(table, Conjunction{ids[2]});
      if (pa <= 0.0 || pb <= 0.0 || pc <= 0.0) return 0.0;
      double pab = lookup(table, Conjunction{ids[0], ids[1]});
      double pac = lookup(table, Conjunction{ids[0], ids[2]});
      double pbc = lookup(table, Conjunction{ids[1], ids[2]});
      return pab * pac * pbc / (pa * pb * pc);
    }
    case 4:
    case 5: {
      // Two base keywords, the rest handled through the previous dimension:
      // P(rest|b0) * P(rest|b1) * P(b0 b1) / P(rest). The division keeps the
      // estimate exact under independence; without it the two conditionals
      // double-count the rest mass.
      KeywordId b0 = ids[0], b1 = ids[1];
      Conjunction rest = conj.without(b0).without(b1);
      double p_rest = estimate_high_dim_entry(table, rest);
      double pb0 = lookup(table, Conjunction{b0});
      double pb1 = lookup(table, Conjunction{b1});
      if (p_rest <= 0.0 || pb0 <= 0.0 || pb1 <= 0.0) return 0.0;
      std::vector<KeywordId> with0(rest.keyword_ids().begin(), rest.keyword_ids().end());
      with0.push_back(b0);
      std::vector<KeywordId> with1(rest.keyword_ids().begin(), rest.keyword_ids().end());
      with1.push_back(b1);
      double p_rest0 = estimate_high_dim_entry(table, Conjunction(with0));
      double p_rest1 = estimate_high_dim_entry(table, Conjunction(with1));
      double pbase = lookup(table, Conjunction{b0, b1});
      return (p_rest0 / pb0) * (p_rest1 / pb1) * pbase / p_rest;
    }
    default:
      throw std::invalid_argument("estimate_high_dim_entry supports dimensions 1..5");
  }
}

FrequencyModel approximate_high_dim(const FrequencyModel& model, std::uint32_t d_target) {
  if (d_target < 3 || d_target > 5)
    throw std::invalid_argument("d_target must be in 3..5");
  std::size_t n = 0;
  for (const auto& [c, p] : model.table) {
    if (c.dim() == 1) ++n;
    if (c.dim() == 1 && p <= 0.0)
      throw std::invalid_argument("approximate_high_dim needs nonzero single marginals");
  }
  if (n < d_target) throw std::invalid_argument("fewer singles than target dimension");

  FrequencyModel out;
  out.d_max = d_target;
  out.epoch = model.epoch;
  out.table = model.table;

  // Enumerate combinations per dimension in lexicographic (= map) order.
  for (std::uint32_t d = 3; d <= d_target; ++d) {
    std::vector<std::size_t> pick(d);
    for (std::uint32_t i = 0; i < d; ++i) pick[i] = i;
    auto end = out.table.end();
    for (;;) {
      std::vector<KeywordId> ids(d);
      for (std::uint32_t i = 0; i < d; ++i) ids[i] = static_cast<KeywordId>(pick[i]);
      Conjunction c(ids);
      double est = estimate_high_dim_entry(model.table, c);
      if (est > 0.0) end = out.table.emplace_hint(end, c, est);

      // next combination
      std::size_t i = d;
      while (i > 0 && pick[i - 1] == n - d + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < d; ++j) pick[j] = pick[j - 1] + 1;
    }
  }

  normalize(out.table);
  return out;
}

FrequencyModel workload_distribution(const FrequencyModel& model, const QuerySetting& setting) {
  setting.validate();
  std::vector<double> dim_mass(Conjunction::kMaxDim + 1, 0.0);
  for (const auto& [c, p] : model.table) dim_mass[c.dim()] += p;

  auto weight_for = [&](std::uint32_t d) -> double {
    if (setting.kind == QuerySetting::Kind::separate)
      return d == setting.dim ? 1.0 : 0.0;
    if (d >= 1 && d <= setting.d_max) return setting.dim_probs[d - 1];
    return 0.0;
  };

  for (std::uint32_t d : setting.active_dims())
    if (dim_mass[d] <= 0.0)
      throw std::runtime_error("setting requires dimension with zero total mass: d=" +
                               std::to_string(d));

  FrequencyModel out;
  out.d_max = setting.max_dim();
  out.epoch = model.epoch;
  for (const auto& [c, p] : model.table) {
    double w = weight_for(static_cast<std::uint32_t>(c.dim()));
    if (w > 0.0 && p > 0.0) out.table.emplace_hint(out.table.end(), c, w * p / dim_mass[c.dim()]);
  }
  normalize(out.table);
  return out;
}

std::uint64_t sterm_universe_count(std::uint64_t keywords_after,
                                   const std::vector<std::uint32_t>& dims) {
  auto choose = [](std::uint64_t n, std::uint64_t k) -> std::uint64_t {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  std::uint64_t total = 0;
  for (std::uint32_t d : dims) total += choose(keywords_after, d - 1);
  return total;
}

StermFrequencyKnowledge derive_sterm_frequencies(const FrequencyModel& model,
                                                 const InvertedIndex& aux_index,
                                                 const QuerySetting& setting) {
  FrequencyModel workload = workload_distribution(model, setting);
  const std::size_t n = aux_index.n_keywords();
  std::vector<std::uint64_t> sizes = [&] {
    std::vector<std::uint64_t> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = aux_index.postings[i].size();
    return s;
  }();

  StermFrequencyKnowledge knowledge;
  knowledge.sterm_freq.assign(n, 0.0);
  knowledge.tables.resize(n);

  for (const auto& [c, p] : workload.table) {
    KeywordId s = select_sterm(c, sizes);
    knowledge.sterm_freq[s] += p;
    knowledge.tables[s].emplace(c, p);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (knowledge.sterm_freq[i] <= 0.0) continue;  // empty table, flagged by zero Sf
    for (auto& [c, p] : knowledge.tables[i]) p /= knowledge.sterm_freq[i];
  }

  // Combination-universe sizes: keyword i is the s-term of a conjunction iff
  // every other member ranks after it in (doc-frequency, index) order.
  knowledge.universe_counts.assign(n, 0);
  std::vector<std::uint32_t> dims = setting.active_dims();
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t after = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (std::pair(sizes[j], j) > std::pair(sizes[i], i)) ++after;
    }
    knowledge.universe_counts[i] = sterm_universe_count(after, dims);
  }
  return knowledge;
}

FrequencyModel apply_temporal_offset(const FrequencyModel& model, double offset_weeks,
                                     double drift, std::uint64_t seed) {
  if (offset_weeks < 0.0 || drift < 0.0)
    throw std::invalid_argument("offset and drift must be >= 0");
  FrequencyModel out = model;
  out.epoch = model.epoch + static_cast<std::int64_t>(offset_weeks);
  if (offset_weeks == 0.0 || drift == 0.0) return out;

  // Dirichlet resampling centered on the current table; concentration decays
  // with offset * drift so staleness degrades smoothly.
  const double concentration =
      static_cast<double>(model.table.size()) / (offset_weeks * drift);
  Rng rng(derive_seed(seed, "freq.offset"));
  for (auto& [c, p] : out.table) {
    if (p <= 0.0) continue;
    p = rng.gamma(p * concentration);
  }
  normalize(out.table);
  return out;
}

double total_variation(const FrequencyModel& a, const FrequencyModel& b) {
  double tv = 0.0;
  for (const auto& [c, p] : a.table) tv += std::abs(p - b.at(c));
  for (const auto& [c, p] : b.table)
    if (a.table.find(c) == a.table.end()) tv += p;
  return tv / 2.0;
}

}  // namespace leaklab
