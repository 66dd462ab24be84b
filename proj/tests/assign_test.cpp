#include <doctest.h>

#include <cmath>
#include <vector>

#include "leaklab/assign.hpp"
#include "leaklab/rng.hpp"

using namespace leaklab;

namespace {

/// Exhaustive optimum over all injective token -> candidate maps.
double brute_force_lap(const Matrix& costs) {
  const std::size_t rows = costs.rows(), cols = costs.cols();
  std::vector<std::size_t> pick(cols);
  std::vector<bool> used(rows, false);
  double best = std::numeric_limits<double>::infinity();
  auto recurse = [&](auto&& self, std::size_t j, double acc) -> void {
    if (j == cols) {
      best = std::min(best, acc);
      return;
    }
    for (std::size_t g = 0; g < rows; ++g) {
      if (used[g]) continue;
      used[g] = true;
      self(self, j + 1, acc + costs(g, j));
      used[g] = false;
    }
  };
  recurse(recurse, 0, 0.0);
  return best;
}

Matrix random_costs(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.uniform() * 20.0 - 10.0;
  return m;
}

}  // namespace

TEST_CASE("small fixed instances") {
  Matrix diag(2, 2);
  diag(0, 0) = 1;
  diag(0, 1) = 2;
  diag(1, 0) = 2;
  diag(1, 1) = 1;
  Assignment a = solve_lap(diag);
  CHECK(a.candidate_of_token[0] == 0);
  CHECK(a.candidate_of_token[1] == 1);
  CHECK(a.objective == doctest::Approx(2.0));

  Matrix one(1, 1);
  one(0, 0) = 7.0;
  Assignment forced = solve_lap(one);
  CHECK(forced.candidate_of_token[0] == 0);
  CHECK(forced.objective == doctest::Approx(7.0));
}

TEST_CASE("optimality against brute force on random rectangles") {
  Rng rng(2025);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t cols = 1 + rng.uniform_u64(5);
    const std::size_t rows = cols + rng.uniform_u64(8 - cols);
    Matrix costs = random_costs(rng, rows, cols);
    Assignment got = solve_lap(costs);
    CHECK(got.objective == doctest::Approx(brute_force_lap(costs)).epsilon(1e-9));
    // injectivity
    std::vector<bool> used(rows, false);
    for (std::size_t j = 0; j < cols; ++j) {
      REQUIRE(got.assigned(j));
      CHECK(!used[got.candidate_of_token[j]]);
      used[got.candidate_of_token[j]] = true;
    }
  }
}

TEST_CASE("more tokens than candidates: worst token goes unassigned") {
  Matrix costs(1, 2);
  costs(0, 0) = 5.0;
  costs(0, 1) = 1.0;
  Assignment a = solve_lap(costs);
  CHECK_FALSE(a.assigned(0));
  CHECK(a.candidate_of_token[1] == 0);
  CHECK(a.objective == doctest::Approx(1.0));
}

TEST_CASE("non-finite costs are rejected") {
  Matrix costs(1, 1);
  costs(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS(solve_lap(costs));
}

TEST_CASE("zero quadratic term reduces to plain LAP") {
  Rng rng(99);
  Matrix linear = random_costs(rng, 6, 4);
  auto zero = [](std::size_t, std::size_t, std::size_t, std::size_t) { return 0.0; };
  Assignment lap = solve_lap(linear);
  Assignment qap = solve_iterative_qap(linear, zero, 0.5, 25, 7);
  CHECK(qap.objective == doctest::Approx(lap.objective).epsilon(1e-9));
  CHECK(qap.candidate_of_token == lap.candidate_of_token);
}

TEST_CASE("single token is re-assigned to the linear argmin") {
  Matrix linear(4, 1);
  linear(0, 0) = 3.0;
  linear(1, 0) = 0.5;
  linear(2, 0) = 2.0;
  linear(3, 0) = 9.0;
  auto quad = [](std::size_t, std::size_t, std::size_t, std::size_t) { return 1.0; };
  Assignment a = solve_iterative_qap(linear, quad, 1.0, 5, 3);
  CHECK(a.candidate_of_token[0] == 1);
}

TEST_CASE("per-round subproblems are optimal given the fixed set") {
  Rng rng(5150);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t cands = 6, tokens = 4;
    Matrix linear = random_costs(rng, cands, tokens);
    std::vector<double> quad_table(cands * cands * tokens * tokens);
    for (auto& q : quad_table) q = rng.uniform() * 4.0 - 2.0;
    auto quad = [&](std::size_t g, std::size_t g2, std::size_t j, std::size_t j2) {
      return quad_table[((g * cands + g2) * tokens + j) * tokens + j2];
    };

    int checked = 0;
    auto observer = [&](const QapRound& round) {
      // Brute force over the free tokens given the fixed assignments.
      std::vector<std::size_t> fixed_tokens;
      std::vector<bool> taken(cands, false);
      std::vector<bool> is_free(tokens, false);
      for (std::size_t j : round.free_tokens) is_free[j] = true;
      for (std::size_t j = 0; j < tokens; ++j) {
        if (is_free[j]) continue;
        fixed_tokens.push_back(j);
        taken[round.assignment_before[j]] = true;
      }
      auto round_cost = [&](const std::vector<std::size_t>& pick) {
        double cost = 0.0;
        for (std::size_t fj = 0; fj < round.free_tokens.size(); ++fj) {
          const std::size_t j = round.free_tokens[fj];
          const std::size_t g = pick[fj];
          cost += linear(g, j);
          for (std::size_t j2 : fixed_tokens)
            cost += quad(g, round.assignment_before[j2], j, j2);
        }
        return cost;
      };
      double best = std::numeric_limits<double>::infinity();
      std::vector<std::size_t> pick(round.free_tokens.size());
      std::vector<bool> used = taken;
      auto recurse = [&](auto&& self, std::size_t fj) -> void {
        if (fj == pick.size()) {
          best = std::min(best, round_cost(pick));
          return;
        }
        for (std::size_t g = 0; g < cands; ++g) {
          if (used[g]) continue;
          used[g] = true;
          pick[fj] = g;
          self(self, fj + 1);
          used[g] = false;
        }
      };
      recurse(recurse, 0);

      std::vector<std::size_t> chosen;
      for (std::size_t j : round.free_tokens) chosen.push_back(round.assignment_after[j]);
      CHECK(round_cost(chosen) == doctest::Approx(best).epsilon(1e-9));
      ++checked;
    };
    solve_iterative_qap(linear, quad, 0.5, 5, 1000 + trial, observer);
    CHECK(checked == 5);
  }
}

TEST_CASE("determinism and parameter validation") {
  Rng rng(1);
  Matrix linear = random_costs(rng, 5, 3);
  auto quad = [](std::size_t g, std::size_t g2, std::size_t j, std::size_t j2) {
    return 0.1 * double(g + g2) - 0.05 * double(j + j2);
  };
  Assignment a = solve_iterative_qap(linear, quad, 0.4, 10, 42);
  Assignment b = solve_iterative_qap(linear, quad, 0.4, 10, 42);
  CHECK(a.candidate_of_token == b.candidate_of_token);
  CHECK(a.objective == b.objective);

  CHECK_THROWS(solve_iterative_qap(linear, quad, 0.0, 10, 1));
  CHECK_THROWS(solve_iterative_qap(linear, quad, 1.5, 10, 1));
  CHECK_THROWS(solve_iterative_qap(linear, quad, 0.5, 0, 1));
}
