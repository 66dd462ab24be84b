#include <doctest.h>

#include <cmath>

#include "leaklab/aux_knowledge.hpp"
#include "leaklab/rng.hpp"

using namespace leaklab;

namespace {

InvertedIndex appendix_fixture() {
  InvertedIndex aux;
  aux.n_docs = 10;
  aux.postings = {{0, 1, 2}, {0}, {2, 3, 4, 5, 6}, {4, 5, 6, 7, 8, 9}};
  return aux;
}

}  // namespace

TEST_CASE("aux volumes with clamping at the extremes") {
  InvertedIndex aux;
  aux.n_docs = 4;
  aux.postings = {{0, 1, 2, 3}, {}};
  auto v = build_aux_volumes(aux);
  CHECK(v[0] == doctest::Approx(1.0 - 1e-6));
  CHECK(v[1] == doctest::Approx(1e-6));

  auto fixture = build_aux_volumes(appendix_fixture());
  CHECK(fixture[0] == doctest::Approx(0.3));
  CHECK(fixture[1] == doctest::Approx(0.1));
  CHECK(fixture[2] == doctest::Approx(0.5));
  CHECK(fixture[3] == doctest::Approx(0.6));
}

TEST_CASE("co-occurrence diagonal equals own volume, disjoint pairs clamp") {
  InvertedIndex aux = appendix_fixture();
  std::vector<Conjunction> universe = {Conjunction{1}, Conjunction{1, 3}, Conjunction{2}};
  Matrix v = build_cooccurrence(aux, universe);
  CHECK(v(0, 0) == doctest::Approx(0.1));   // |D(w2)| / 10
  CHECK(v(2, 2) == doctest::Approx(0.5));
  CHECK(v(0, 1) == doctest::Approx(1e-6));  // {0} vs {} intersection clamps
  CHECK(v(1, 1) == doctest::Approx(1e-6));  // w2 and w4 never co-occur
  CHECK(v(0, 2) == doctest::Approx(1e-6));  // doc 0 not in D(w3)
}

TEST_CASE("co-occurrence matches a per-document brute-force scan") {
  Rng rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n_docs = 10 + rng.uniform_u64(41);  // up to 50 docs
    const std::size_t n_kw = 4 + rng.uniform_u64(4);
    std::vector<std::vector<KeywordId>> doc_keywords(n_docs);
    InvertedIndex aux;
    aux.n_docs = n_docs;
    aux.postings.resize(n_kw);
    for (std::size_t d = 0; d < n_docs; ++d)
      for (std::size_t k = 0; k < n_kw; ++k)
        if (rng.bernoulli(0.4)) {
          doc_keywords[d].push_back(KeywordId(k));
          aux.postings[k].push_back(d);
        }

    std::vector<Conjunction> universe;
    universe.push_back(Conjunction{0, 1});
    universe.push_back(Conjunction{0, 2});
    universe.push_back(Conjunction{1, 2, 3});

    Matrix got = build_cooccurrence(aux, universe);
    auto matches = [&](std::size_t d, const Conjunction& c) {
      for (KeywordId k : c.keyword_ids()) {
        bool found = false;
        for (KeywordId dk : doc_keywords[d]) found |= dk == k;
        if (!found) return false;
      }
      return true;
    };
    for (std::size_t g = 0; g < universe.size(); ++g)
      for (std::size_t g2 = 0; g2 < universe.size(); ++g2) {
        std::uint64_t count = 0;
        for (std::size_t d = 0; d < n_docs; ++d)
          if (matches(d, universe[g]) && matches(d, universe[g2])) ++count;
        const double expected = clamp_prob(double(count) / double(n_docs));
        CHECK(got(g, g2) == doctest::Approx(expected).epsilon(1e-12));
      }
  }
}

TEST_CASE("clrz volume adaptation") {
  CHECK(adapt_clrz_volume(0.1, 0.999, 0.01) == doctest::Approx(0.1089).epsilon(1e-12));
  CHECK(adapt_clrz_volume(0.0, 0.7, 0.2) == doctest::Approx(0.2));
  auto same = adapt_clrz_volumes({0.2, 0.8}, 1.0, 0.0);
  CHECK(same[0] == doctest::Approx(0.2));
  CHECK(same[1] == doctest::Approx(0.8));
  CHECK_THROWS(adapt_clrz_volumes({0.5}, 1.2, 0.0));
}

TEST_CASE("clrz co-occurrence adaptation follows the piecewise form") {
  Matrix both(2, 2), neither(2, 2);
  both(0, 0) = 0.2;
  neither(0, 0) = 0.8;
  both(1, 1) = 0.3;
  neither(1, 1) = 0.7;
  both(0, 1) = both(1, 0) = 0.0;
  neither(0, 1) = neither(1, 0) = 1.0;

  Matrix adapted = adapt_clrz_cooccurrence(both, neither, 0.9, 0.1, 2);
  CHECK(adapted(0, 0) == doctest::Approx(0.81 * 0.2 + 0.01 * 0.8).epsilon(1e-12));  // 0.170

  Matrix d1 = adapt_clrz_cooccurrence(both, neither, 0.9, 0.1, 1);
  CHECK(d1(0, 1) == doctest::Approx(0.01).epsilon(1e-9));  // FPR^2 in the disjoint limit

  // Identity parameters for every dimension.
  for (std::uint32_t d = 1; d <= 5; ++d) {
    Matrix id = adapt_clrz_cooccurrence(both, neither, 1.0, 0.0, d);
    for (std::size_t g = 0; g < 2; ++g)
      for (std::size_t g2 = 0; g2 < 2; ++g2)
        CHECK(id(g, g2) == doctest::Approx(clamp_prob(both(g, g2))).epsilon(1e-12));
  }

  Matrix bad_neither(2, 2);
  for (std::size_t g = 0; g < 2; ++g)
    for (std::size_t g2 = 0; g2 < 2; ++g2) bad_neither(g, g2) = 2.5;
  CHECK_THROWS(adapt_clrz_cooccurrence(both, bad_neither, 0.9, 0.1, 1));
}

TEST_CASE("seal adaptation duplicates documents then pads") {
  // Five documents, ids 0..4, keyword 0 in all, keyword 1 in two.
  InvertedIndex aux;
  aux.n_docs = 5;
  aux.postings = {{0, 1, 2, 3, 4}, {1, 3}};

  InvertedIndex doubled = adapt_seal(aux, 2, 10);
  CHECK(doubled.n_docs == 10);
  // every original document duplicated once -> posting sizes double, then pad
  CHECK(doubled.postings[1].size() == 4);   // 2 -> 4 (already a power of 2)
  CHECK(doubled.postings[0].size() == 16);  // 10 -> 16

  // Fixed point: already at target, postings already powers of x.
  InvertedIndex fixed;
  fixed.n_docs = 4;
  fixed.postings = {{0, 1}, {0, 1, 2, 3}};
  InvertedIndex unchanged = adapt_seal(fixed, 2, 4);
  CHECK(unchanged.postings == fixed.postings);
  CHECK(unchanged.n_docs == 4);

  // Posting of size 10 pads to 27 under x=3.
  InvertedIndex ten;
  ten.n_docs = 10;
  ten.postings = {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};
  InvertedIndex padded = adapt_seal(ten, 3, 10);
  CHECK(padded.postings[0].size() == 27);

  CHECK_THROWS(adapt_seal(InvertedIndex{}, 2, 10));
}
