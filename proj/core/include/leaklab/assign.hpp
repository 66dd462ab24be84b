#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "leaklab/types.hpp"

namespace leaklab {

/// Injective token -> candidate map. Tokens that had to land on virtual
/// padding rows (more tokens than candidates) are kUnassigned and excluded
/// from the objective.
struct Assignment {
  static constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> candidate_of_token;
  double objective = 0.0;

  bool assigned(std::size_t token) const {
    return candidate_of_token[token] != kUnassigned;
  }
};

/// Optimal rectangular linear assignment: every column (token) gets a
/// distinct row (candidate) minimizing total cost. Shortest augmenting path
/// with potentials. When rows < cols the matrix is padded with virtual rows
/// at uniform high cost; tokens on virtual rows come back unassigned.
Assignment solve_lap(const Matrix& costs);

/// Quadratic interaction cost between candidate rows (g, g2) under tokens
/// (j, j2). Must be symmetric under swapping the two pairs together.
using QuadCost = std::function<double(std::size_t g, std::size_t g2, std::size_t j, std::size_t j2)>;

/// Per-round trace for tests: which tokens were free, the surrounding fixed
/// assignment, and what the round's subproblem chose.
struct QapRound {
  int round = 0;
  std::vector<std::size_t> free_tokens;
  std::vector<std::size_t> assignment_before;
  std::vector<std::size_t> assignment_after;
};
using QapRoundObserver = std::function<void(const QapRound&)>;

/// Iterative refinement for assignment problems with pairwise interactions.
/// Starts from solve_lap(linear); each round frees ceil(p_free * cols)
/// uniformly sampled tokens, keeps the rest fixed, and solves that LAP
/// exactly with costs linear(g,j) + sum over fixed (g',j') of quad(g,g',j,j').
/// The returned objective includes linear plus quad over all unordered
/// assigned token pairs. Deterministic in seed.
Assignment solve_iterative_qap(const Matrix& linear, const QuadCost& quad, double p_free,
                               int n_iter, std::uint64_t seed,
                               const QapRoundObserver& observer = nullptr);

}  // namespace leaklab
