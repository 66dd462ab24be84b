#include <doctest.h>

#include <cmath>
#include <vector>

#include "leaklab/freq_model.hpp"
#include "leaklab/rng.hpp"

using namespace leaklab;

namespace {

double table_sum(const FrequencyModel& m) { return m.total_mass(); }

/// Event-probability table for independent keywords with given marginals,
/// singles and pairs only.
FreqTable independent_pairs_table(const std::vector<double>& marginal) {
  FreqTable t;
  for (std::size_t i = 0; i < marginal.size(); ++i)
    t.emplace(Conjunction{KeywordId(i)}, marginal[i]);
  for (std::size_t i = 0; i < marginal.size(); ++i)
    for (std::size_t j = i + 1; j < marginal.size(); ++j)
      t.emplace(Conjunction{KeywordId(i), KeywordId(j)}, marginal[i] * marginal[j]);
  return t;
}

/// Brute-force joint over 5 binary events: prob[mask] per atom. Event
/// probability of a subset = sum of atoms covering it.
struct Joint5 {
  std::vector<double> atom;  // size 32

  double event(const Conjunction& c) const {
    std::uint32_t want = 0;
    for (KeywordId k : c.keyword_ids()) want |= 1u << k;
    double p = 0.0;
    for (std::uint32_t mask = 0; mask < 32; ++mask)
      if ((mask & want) == want) p += atom[mask];
    return p;
  }

  FreqTable pairs_table() const {
    FreqTable t;
    for (KeywordId i = 0; i < 5; ++i) t.emplace(Conjunction{i}, event(Conjunction{i}));
    for (KeywordId i = 0; i < 5; ++i)
      for (KeywordId j = i + 1; j < 5; ++j)
        t.emplace(Conjunction{i, j}, event(Conjunction{i, j}));
    return t;
  }
};

}  // namespace

TEST_CASE("synthetic frequencies: entry counts and normalization") {
  FrequencyModel two = gen_synthetic_frequencies(2, 2, 1.0, 1);
  CHECK(two.table.size() == 3);  // two singles + one pair
  CHECK(table_sum(two) == doctest::Approx(1.0).epsilon(1e-9));

  FrequencyModel ten = gen_synthetic_frequencies(10, 2, 1.0, 2);
  double prev = 2.0;
  for (KeywordId i = 0; i < 10; ++i) {
    double p = ten.at(Conjunction{i});
    CHECK(p <= prev);
    prev = p;
  }

  FrequencyModel one = gen_synthetic_frequencies(1, 2, 1.0, 3);
  CHECK(one.table.size() == 1);
  CHECK(one.at(Conjunction{0}) == doctest::Approx(1.0));

  CHECK_THROWS(gen_synthetic_frequencies(10, 2, 0.0, 1));
}

TEST_CASE("synthetic frequencies: pair head near 1e-2 with sharp decay at n=300") {
  FrequencyModel model = gen_synthetic_frequencies(300, 2, 1.0, 7);
  std::vector<double> pair_freqs;
  for (const auto& [c, p] : model.table)
    if (c.dim() == 2) pair_freqs.push_back(p);
  std::sort(pair_freqs.rbegin(), pair_freqs.rend());
  REQUIRE(pair_freqs.size() == 300 * 299 / 2);
  CHECK(pair_freqs.front() > 1e-3);
  CHECK(pair_freqs.front() < 5e-2);
  CHECK(pair_freqs[100] < pair_freqs.front() / 3.0);      // sharp head
  CHECK(pair_freqs[10000] < pair_freqs.front() / 100.0);  // long tail
}

TEST_CASE("high-dim estimate is exact for independent events") {
  FreqTable t = independent_pairs_table({0.5, 0.5, 0.5});
  CHECK(estimate_high_dim_entry(t, Conjunction{0, 1, 2}) ==
        doctest::Approx(0.125).epsilon(1e-12));

  FreqTable t5 = independent_pairs_table({0.5, 0.4, 0.3, 0.2, 0.6});
  const std::vector<double> m = {0.5, 0.4, 0.3, 0.2, 0.6};
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    std::vector<KeywordId> ids;
    double expected = 1.0;
    for (KeywordId k = 0; k < 5; ++k)
      if (mask & (1u << k)) {
        ids.push_back(k);
        expected *= m[k];
      }
    if (ids.size() < 3) continue;
    const double est = estimate_high_dim_entry(t5, Conjunction(ids));
    CHECK(std::abs(est - expected) < 1e-12);
  }
}

TEST_CASE("zero pair frequency forces zero triples") {
  FreqTable t = independent_pairs_table({0.5, 0.5, 0.5, 0.5});
  t[Conjunction{0, 1}] = 0.0;
  CHECK(estimate_high_dim_entry(t, Conjunction{0, 1, 2}) == 0.0);
  CHECK(estimate_high_dim_entry(t, Conjunction{0, 1, 3}) == 0.0);
  CHECK(estimate_high_dim_entry(t, Conjunction{0, 1, 2, 3}) == 0.0);
  CHECK(estimate_high_dim_entry(t, Conjunction{0, 2, 3}) > 0.0);
}

TEST_CASE("approximation MSE against brute-force joints stays small") {
  Rng rng(515);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    Joint5 joint;
    joint.atom.resize(32);
    double sum = 0.0;
    for (auto& a : joint.atom) {
      a = rng.gamma(1.0);
      sum += a;
    }
    for (auto& a : joint.atom) a /= sum;

    FreqTable pairs = joint.pairs_table();
    double mse = 0.0;
    int count = 0;
    for (std::uint32_t mask = 0; mask < 32; ++mask) {
      std::vector<KeywordId> ids;
      for (KeywordId k = 0; k < 5; ++k)
        if (mask & (1u << k)) ids.push_back(k);
      if (ids.size() < 3) continue;
      Conjunction c(ids);
      const double err = estimate_high_dim_entry(pairs, c) - joint.event(c);
      mse += err * err;
      ++count;
    }
    mse /= count;
    worst = std::max(worst, mse);
  }
  MESSAGE("worst MSE over 5 random correlated joints: ", worst);
  CHECK(worst <= 1e-2);
}

TEST_CASE("approximate_high_dim fills all combinations and renormalizes") {
  FrequencyModel model;
  model.d_max = 2;
  model.table = independent_pairs_table({0.5, 0.4, 0.3, 0.2});
  FrequencyModel out = approximate_high_dim(model, 4);
  CHECK(out.d_max == 4);
  // 4 singles + 6 pairs + 4 triples + 1 quad
  CHECK(out.table.size() == 15);
  CHECK(table_sum(out) == doctest::Approx(1.0).epsilon(1e-9));
  // Proportions survive normalization: P(012)/P(013) = m2/m3.
  const double r = out.at(Conjunction{0, 1, 2}) / out.at(Conjunction{0, 1, 3});
  CHECK(r == doctest::Approx(0.3 / 0.2).epsilon(1e-9));

  CHECK_THROWS(approximate_high_dim(model, 2));
  CHECK_THROWS(approximate_high_dim(model, 6));
}

TEST_CASE("workload distribution reweights dimensions") {
  FrequencyModel model;
  model.table.emplace(Conjunction{0}, 0.6);
  model.table.emplace(Conjunction{1}, 0.2);
  model.table.emplace(Conjunction{0, 1}, 0.2);
  model.d_max = 2;

  FrequencyModel sep = workload_distribution(model, QuerySetting::separate(1));
  CHECK(sep.table.size() == 2);
  CHECK(sep.at(Conjunction{0}) == doctest::Approx(0.75));

  FrequencyModel hyb = workload_distribution(model, QuerySetting::hybrid(2, {0.5, 0.5}));
  CHECK(hyb.at(Conjunction{0, 1}) == doctest::Approx(0.5));
  CHECK(hyb.at(Conjunction{0}) == doctest::Approx(0.375));
  CHECK(table_sum(hyb) == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS(workload_distribution(model, QuerySetting::separate(3)));
}

TEST_CASE("s-term frequency derivation reproduces the worked fixture") {
  // Universe w1..w4 (indices 0..3), auxiliary posting sizes [3,1,5,6].
  InvertedIndex aux;
  aux.n_docs = 10;
  aux.postings = {{0, 1, 2}, {0}, {2, 3, 4, 5, 6}, {4, 5, 6, 7, 8, 9}};

  FrequencyModel model;
  model.d_max = 3;
  model.table.emplace(Conjunction{3}, 0.1);
  model.table.emplace(Conjunction{0, 2}, 0.1);
  model.table.emplace(Conjunction{1, 3}, 0.2);
  model.table.emplace(Conjunction{1, 2}, 0.1);
  model.table.emplace(Conjunction{2, 3}, 0.3);
  model.table.emplace(Conjunction{1, 2, 3}, 0.1);
  model.table.emplace(Conjunction{0, 3}, 0.1);

  QuerySetting setting = QuerySetting::hybrid(3, {0.1, 0.8, 0.1});
  StermFrequencyKnowledge knowledge = derive_sterm_frequencies(model, aux, setting);

  REQUIRE(knowledge.sterm_freq.size() == 4);
  CHECK(knowledge.sterm_freq[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(knowledge.sterm_freq[1] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(knowledge.sterm_freq[2] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(knowledge.sterm_freq[3] == doctest::Approx(0.1).epsilon(1e-12));

  CHECK(knowledge.tables[0].at(Conjunction{0, 2}) == doctest::Approx(0.5));
  CHECK(knowledge.tables[0].at(Conjunction{0, 3}) == doctest::Approx(0.5));
  CHECK(knowledge.tables[1].at(Conjunction{1, 3}) == doctest::Approx(0.5));
  CHECK(knowledge.tables[1].at(Conjunction{1, 2, 3}) == doctest::Approx(0.25));
  CHECK(knowledge.tables[2].at(Conjunction{2, 3}) == doctest::Approx(1.0));
  CHECK(knowledge.tables[3].at(Conjunction{3}) == doctest::Approx(1.0));

  // m-tilde over dims {1,2,3} with volume order w2 < w1 < w3 < w4.
  CHECK(knowledge.universe_counts[0] == 4);
  CHECK(knowledge.universe_counts[1] == 7);
  CHECK(knowledge.universe_counts[2] == 2);
  CHECK(knowledge.universe_counts[3] == 1);

  double sum = 0.0;
  for (double sf : knowledge.sterm_freq) sum += sf;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& table : knowledge.tables) {
    if (table.empty()) continue;
    double tsum = 0.0;
    for (const auto& [c, p] : table) tsum += p;
    CHECK(tsum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("singles-only model: Sf equals the single-keyword vector") {
  InvertedIndex aux;
  aux.n_docs = 4;
  aux.postings = {{0}, {0, 1}, {0, 1, 2}};
  FrequencyModel model;
  model.d_max = 1;
  model.table.emplace(Conjunction{0}, 0.5);
  model.table.emplace(Conjunction{1}, 0.3);
  model.table.emplace(Conjunction{2}, 0.2);
  StermFrequencyKnowledge knowledge =
      derive_sterm_frequencies(model, aux, QuerySetting::separate(1));
  CHECK(knowledge.sterm_freq[0] == doctest::Approx(0.5));
  CHECK(knowledge.sterm_freq[1] == doctest::Approx(0.3));
  CHECK(knowledge.sterm_freq[2] == doctest::Approx(0.2));
}

TEST_CASE("forced partition with a single conjunction") {
  InvertedIndex aux;
  aux.n_docs = 4;
  aux.postings = {{0}, {0, 1, 2}};
  FrequencyModel model;
  model.d_max = 2;
  model.table.emplace(Conjunction{0, 1}, 1.0);
  StermFrequencyKnowledge knowledge =
      derive_sterm_frequencies(model, aux, QuerySetting::separate(2));
  CHECK(knowledge.sterm_freq[0] == doctest::Approx(1.0));
  CHECK(knowledge.sterm_freq[1] == doctest::Approx(0.0));
  CHECK(knowledge.tables[0].at(Conjunction{0, 1}) == doctest::Approx(1.0));
  CHECK(knowledge.tables[1].empty());
}

TEST_CASE("temporal offset: identity cases and reproducible drift") {
  FrequencyModel model = gen_synthetic_frequencies(20, 2, 1.0, 11);

  FrequencyModel same_t = apply_temporal_offset(model, 0.0, 0.5, 4);
  CHECK(total_variation(model, same_t) == 0.0);
  FrequencyModel same_d = apply_temporal_offset(model, 200.0, 0.0, 4);
  CHECK(total_variation(model, same_d) == 0.0);

  FrequencyModel drifted = apply_temporal_offset(model, 100.0, 0.01, 4);
  const double tv = total_variation(model, drifted);
  CHECK(tv > 0.0);
  CHECK(table_sum(drifted) == doctest::Approx(1.0).epsilon(1e-9));
  FrequencyModel drifted2 = apply_temporal_offset(model, 100.0, 0.01, 4);
  CHECK(total_variation(drifted, drifted2) == 0.0);

  // Drift grows with the offset.
  FrequencyModel far = apply_temporal_offset(model, 10000.0, 0.01, 4);
  CHECK(total_variation(model, far) > tv);
}

TEST_CASE("sterm_universe_count matches direct combinatorics") {
  CHECK(sterm_universe_count(3, {1, 2, 3}) == 7);
  CHECK(sterm_universe_count(0, {2}) == 0);
  CHECK(sterm_universe_count(5, {3}) == 10);
  // Sum over ranks equals the total combination count.
  std::uint64_t total = 0;
  for (std::uint64_t after = 0; after < 10; ++after)
    total += sterm_universe_count(after, {2});
  CHECK(total == 45);  // C(10,2)
}
