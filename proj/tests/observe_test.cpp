#include <doctest.h>

#include <filesystem>

#include "leaklab/io.hpp"
#include "leaklab/observe.hpp"
#include "leaklab/sse_sim.hpp"

using namespace leaklab;

namespace {

/// Keywords w1..w5 (ids 0..4) with strictly increasing volumes so the
/// intended s-terms of the worked token-group example hold.
InvertedIndex staircase_index() {
  InvertedIndex index;
  index.n_docs = 6;
  index.postings.resize(5);
  for (std::size_t k = 0; k < 5; ++k)
    for (DocId d = 0; d < k + 1; ++d) index.postings[k].push_back(d);
  return index;
}

}  // namespace

TEST_CASE("token-group counts reproduce the worked example") {
  LeakageSimulator sim(staircase_index());
  LeakageTrace trace;
  for (const auto& q : std::vector<Conjunction>{{0, 1}, {0, 2}, {0, 2}, {1, 2},
                                                {1, 3}, {1, 3}, {1, 4}, {2, 3}})
    trace.push_back(sim.answer_query(q));

  ObservationSet obs = build_observations(trace, 6, 100);
  CHECK(obs.n_sterm_tokens() == 3);
  REQUIRE(obs.combo_count.size() == 3);
  CHECK(obs.combo_count[0] == 2);
  CHECK(obs.combo_count[1] == 3);
  CHECK(obs.combo_count[2] == 1);
  CHECK(obs.combo_count_norm[1] == doctest::Approx(0.03));

  CHECK(obs.sterm_freq[0] == doctest::Approx(3.0 / 8));
  CHECK(obs.sterm_freq[1] == doctest::Approx(4.0 / 8));
  CHECK(obs.sterm_freq[2] == doctest::Approx(1.0 / 8));
  CHECK(obs.volume[0] == doctest::Approx(1.0 / 6));  // |D(w1)| = 1

  // Group frequencies count repeats.
  const TokenGroup& g0 = obs.groups[0];
  CHECK(g0.total == 3);
  CHECK(g0.freq[0] == doctest::Approx(1.0 / 3));  // (w1,w2) once
  CHECK(g0.freq[1] == doctest::Approx(2.0 / 3));  // (w1,w3) twice
}

TEST_CASE("degenerate trace of one repeated query") {
  LeakageSimulator sim(staircase_index());
  LeakageTrace trace;
  for (int i = 0; i < 7; ++i) trace.push_back(sim.answer_query(Conjunction{1, 2}));
  ObservationSet obs = build_observations(trace, 6, 10);
  CHECK(obs.n_sterm_tokens() == 1);
  CHECK(obs.sterm_freq[0] == doctest::Approx(1.0));
  CHECK(obs.combo_count[0] == 1);
  CHECK(obs.groups[0].freq[0] == doctest::Approx(1.0));
}

TEST_CASE("disjoint result sets zero the off-diagonal") {
  // Two conjunctions sharing an s-term with disjoint results of sizes 2 and 3.
  InvertedIndex index;
  index.n_docs = 10;
  index.postings = {
      {0, 1, 2, 3, 4},     // s-term keyword (smallest volume 5)
      {0, 1, 5, 6, 7, 8},  // intersect -> {0,1}
      {2, 3, 4, 5, 6, 9},  // intersect -> {2,3,4}
  };
  LeakageSimulator sim(index);
  LeakageTrace trace;
  trace.push_back(sim.answer_query(Conjunction{0, 1}));
  trace.push_back(sim.answer_query(Conjunction{0, 2}));
  ObservationSet obs = build_observations(trace, 10, 4);
  REQUIRE(obs.groups.size() == 1);
  const Matrix& v = obs.groups[0].volume;
  CHECK(v(0, 0) == doctest::Approx(0.2));
  CHECK(v(1, 1) == doctest::Approx(0.3));
  CHECK(v(0, 1) == 0.0);
  CHECK(v(1, 0) == 0.0);
}

TEST_CASE("volume matrix is symmetric with dominated off-diagonals") {
  LeakageSimulator sim(staircase_index());
  LeakageTrace trace;
  for (const auto& q : std::vector<Conjunction>{{2, 3}, {2, 4}, {2, 3, 4}, {3, 4}})
    trace.push_back(sim.answer_query(q));
  ObservationSet obs = build_observations(trace, 6, 10);
  for (const auto& g : obs.groups) {
    std::uint64_t sum_counts = 0;
    for (auto c : g.counts) sum_counts += c;
    CHECK(sum_counts == g.total);
    double fsum = 0.0;
    for (double f : g.freq) fsum += f;
    CHECK(fsum == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t j = 0; j < g.volume.rows(); ++j)
      for (std::size_t j2 = 0; j2 < g.volume.cols(); ++j2) {
        CHECK(g.volume(j, j2) == g.volume(j2, j));
        CHECK(g.volume(j, j2) <= std::min(g.volume(j, j), g.volume(j2, j2)) + 1e-12);
      }
  }
}

TEST_CASE("observations rebuilt from a re-serialized trace are identical") {
  LeakageSimulator sim(staircase_index());
  LeakageTrace trace;
  for (const auto& q : std::vector<Conjunction>{{0, 1}, {0, 2}, {1, 2}, {0, 1}, {3, 4}})
    trace.push_back(sim.answer_query(q));

  auto path = std::filesystem::temp_directory_path() / "leaklab_trace_roundtrip.txt";
  write_trace(path, trace);
  LeakageTrace reread = read_trace(path);
  CHECK(trace_to_string(reread) == trace_to_string(trace));

  ObservationSet a = build_observations(trace, 6, 10);
  ObservationSet b = build_observations(reread, 6, 10);
  CHECK(a.sterm_tokens == b.sterm_tokens);
  CHECK(a.volume == b.volume);
  CHECK(a.sterm_freq == b.sterm_freq);
  CHECK(a.combo_count == b.combo_count);
  REQUIRE(a.groups.size() == b.groups.size());
  for (std::size_t u = 0; u < a.groups.size(); ++u) {
    CHECK(a.groups[u].full_tokens == b.groups[u].full_tokens);
    CHECK(a.groups[u].freq == b.groups[u].freq);
    for (std::size_t j = 0; j < a.groups[u].volume.rows(); ++j)
      for (std::size_t j2 = 0; j2 < a.groups[u].volume.cols(); ++j2)
        CHECK(a.groups[u].volume(j, j2) == b.groups[u].volume(j, j2));
  }
}

TEST_CASE("inconsistent s-term volumes are rejected") {
  auto results = std::make_shared<const std::vector<DocId>>(std::vector<DocId>{0});
  LeakageRecord a{{0, 0}, 5, results};
  LeakageRecord b{{1, 0}, 6, results};  // same s-term token, different volume
  CHECK_THROWS(build_observations({a, b}, 10, 4));
  CHECK_THROWS(build_observations({}, 10, 4));
  CHECK_THROWS(build_observations({a}, 0, 4));
  CHECK_THROWS(build_observations({a}, 10, 0));
}
