#include "leaklab/assign.hpp"

#include <cmath>
#include <stdexcept>

#include "leaklab/rng.hpp"

namespace leaklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Core solver on an abstract cost accessor. n_tokens <= n_rows required
/// (callers pad beforehand). Returns per-token row indices.
std::vector<std::size_t> lap_core(std::size_t n_tokens, std::size_t n_rows,
                                  const std::function<double(std::size_t, std::size_t)>& cost) {
  // 1-indexed potentials/matching as in the classic formulation.
  std::vector<double> u(n_tokens + 1, 0.0), v(n_rows + 1, 0.0);
  std::vector<std::size_t> p(n_rows + 1, 0), way(n_rows + 1, 0);

  for (std::size_t i = 1; i <= n_tokens; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n_rows + 1, kInf);
    std::vector<bool> used(n_rows + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n_rows; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n_rows; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    // Unwind the augmenting path.
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> row_of_token(n_tokens, Assignment::kUnassigned);
  for (std::size_t j = 1; j <= n_rows; ++j)
    if (p[j] != 0) row_of_token[p[j] - 1] = j - 1;
  return row_of_token;
}

}  // namespace

Assignment solve_lap(const Matrix& costs) {
  const std::size_t rows = costs.rows(), cols = costs.cols();
  if (rows == 0 || cols == 0) throw std::invalid_argument("empty cost matrix");
  double max_entry = -kInf;
  for (double c : costs.data()) {
    if (!std::isfinite(c)) throw std::invalid_argument("cost matrix entries must be finite");
    max_entry = std::max(max_entry, c);
  }

  // Virtual rows when candidates are scarcer than tokens.
  const std::size_t padded_rows = std::max(rows, cols);
  const double virtual_cost = max_entry + 1.0;
  auto cost = [&](std::size_t token, std::size_t row) {
    return row < rows ? costs(row, token) : virtual_cost;
  };

  Assignment result;
  result.candidate_of_token = lap_core(cols, padded_rows, cost);
  for (std::size_t j = 0; j < cols; ++j) {
    auto& g = result.candidate_of_token[j];
    if (g >= rows) {
      g = Assignment::kUnassigned;
    } else {
      result.objective += costs(g, j);
    }
  }
  return result;
}

Assignment solve_iterative_qap(const Matrix& linear, const QuadCost& quad, double p_free,
                               int n_iter, std::uint64_t seed,
                               const QapRoundObserver& observer) {
  if (p_free <= 0.0 || p_free > 1.0) throw std::invalid_argument("p_free must be in (0,1]");
  if (n_iter < 1) throw std::invalid_argument("n_iter must be >= 1");
  const std::size_t rows = linear.rows(), cols = linear.cols();

  Assignment current = solve_lap(linear);
  Rng rng(derive_seed(seed, "qap"));
  const std::size_t n_free = std::min<std::size_t>(
      cols, static_cast<std::size_t>(std::ceil(p_free * static_cast<double>(cols))));

  for (int round = 0; round < n_iter; ++round) {
    std::vector<std::size_t> free_tokens = rng.sample_without_replacement(cols, n_free);
    std::sort(free_tokens.begin(), free_tokens.end());

    std::vector<bool> is_free(cols, false);
    for (std::size_t j : free_tokens) is_free[j] = true;

    // Fixed pairs with a real candidate contribute interaction costs and
    // block their rows for this round.
    std::vector<std::pair<std::size_t, std::size_t>> fixed;  // (token, row)
    std::vector<bool> row_taken(rows, false);
    for (std::size_t j = 0; j < cols; ++j) {
      if (is_free[j]) continue;
      const std::size_t g = current.candidate_of_token[j];
      if (g == Assignment::kUnassigned) continue;
      fixed.emplace_back(j, g);
      row_taken[g] = true;
    }

    std::vector<std::size_t> avail_rows;
    for (std::size_t g = 0; g < rows; ++g)
      if (!row_taken[g]) avail_rows.push_back(g);

    QapRound info;
    if (observer) {
      info.round = round;
      info.free_tokens = free_tokens;
      info.assignment_before = current.candidate_of_token;
    }

    if (!avail_rows.empty()) {
      Matrix sub(avail_rows.size(), free_tokens.size());
      for (std::size_t sg = 0; sg < avail_rows.size(); ++sg) {
        const std::size_t g = avail_rows[sg];
        for (std::size_t sj = 0; sj < free_tokens.size(); ++sj) {
          const std::size_t j = free_tokens[sj];
          double c = linear(g, j);
          for (const auto& [j2, g2] : fixed) c += quad(g, g2, j, j2);
          sub(sg, sj) = c;
        }
      }
      Assignment sub_result = solve_lap(sub);
      for (std::size_t sj = 0; sj < free_tokens.size(); ++sj) {
        const std::size_t sg = sub_result.candidate_of_token[sj];
        current.candidate_of_token[free_tokens[sj]] =
            sg == Assignment::kUnassigned ? Assignment::kUnassigned : avail_rows[sg];
      }
    } else {
      for (std::size_t j : free_tokens)
        current.candidate_of_token[j] = Assignment::kUnassigned;
    }

    if (observer) {
      info.assignment_after = current.candidate_of_token;
      observer(info);
    }
  }

  // Full linear + pairwise objective over assigned tokens.
  current.objective = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    const std::size_t g = current.candidate_of_token[j];
    if (g == Assignment::kUnassigned) continue;
    current.objective += linear(g, j);
    for (std::size_t j2 = j + 1; j2 < cols; ++j2) {
      const std::size_t g2 = current.candidate_of_token[j2];
      if (g2 == Assignment::kUnassigned) continue;
      current.objective += quad(g, g2, j, j2);
    }
  }
  return current;
}

}  // namespace leaklab
