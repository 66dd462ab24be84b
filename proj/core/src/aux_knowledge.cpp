#include "leaklab/aux_knowledge.hpp"

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace leaklab {

std::vector<double> build_aux_volumes(const InvertedIndex& aux_index) {
  if (aux_index.n_docs == 0) throw std::invalid_argument("auxiliary index has no documents");
  std::vector<double> v(aux_index.postings.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = clamp_prob(static_cast<double>(aux_index.postings[i].size()) /
                      static_cast<double>(aux_index.n_docs));
  return v;
}

CooccurrenceMatrices build_cooccurrence_matrices(const InvertedIndex& aux_index,
                                                 std::span<const Conjunction> universe,
                                                 bool with_neither) {
  if (aux_index.n_docs == 0) throw std::invalid_argument("auxiliary index has no documents");
  const std::size_t k = universe.size();
  const double n = static_cast<double>(aux_index.n_docs);

  std::vector<std::vector<DocId>> match(k);
  for (std::size_t g = 0; g < k; ++g) match[g] = docs_matching(aux_index, universe[g]);

  CooccurrenceMatrices out;
  out.both = Matrix(k, k);
  if (with_neither) out.neither = Matrix(k, k);
  for (std::size_t g = 0; g < k; ++g) {
    for (std::size_t g2 = g; g2 < k; ++g2) {
      const std::uint64_t shared = g == g2 ? match[g].size()
                                           : intersection_size(match[g], match[g2]);
      const double both = clamp_prob(static_cast<double>(shared) / n);
      out.both(g, g2) = both;
      out.both(g2, g) = both;
      if (with_neither) {
        const std::uint64_t covered =
            g == g2 ? match[g].size() : union_size(match[g], match[g2]);
        const double neither = (n - static_cast<double>(covered)) / n;
        out.neither(g, g2) = neither;
        out.neither(g2, g) = neither;
      }
    }
  }
  return out;
}

Matrix build_cooccurrence(const InvertedIndex& aux_index,
                          std::span<const Conjunction> universe) {
  return build_cooccurrence_matrices(aux_index, universe, false).both;
}

Matrix build_cooccurrence_not(const InvertedIndex& aux_index,
                              std::span<const Conjunction> universe) {
  return build_cooccurrence_matrices(aux_index, universe, true).neither;
}

double adapt_clrz_volume(double volume, double tpr, double fpr) {
  return volume * tpr + (1.0 - volume) * fpr;
}

std::vector<double> adapt_clrz_volumes(const std::vector<double>& volumes, double tpr,
                                       double fpr) {
  if (tpr < 0.0 || tpr > 1.0 || fpr < 0.0 || fpr > 1.0)
    throw std::invalid_argument("tpr/fpr must be probabilities");
  std::vector<double> out(volumes.size());
  for (std::size_t i = 0; i < volumes.size(); ++i)
    out[i] = clamp_prob(adapt_clrz_volume(volumes[i], tpr, fpr));
  return out;
}

Matrix adapt_clrz_cooccurrence(const Matrix& both, const Matrix& neither, double tpr,
                               double fpr, std::uint32_t d) {
  if (both.rows() != both.cols() || neither.rows() != both.rows() ||
      neither.cols() != both.cols())
    throw std::invalid_argument("co-occurrence matrices must be square and consistent");
  const double tp_d = std::pow(tpr, d);
  const double fp_d = std::pow(fpr, d);
  const std::size_t k = both.rows();
  Matrix out(k, k);
  for (std::size_t g = 0; g < k; ++g) {
    for (std::size_t g2 = 0; g2 < k; ++g2) {
      const double v = both(g, g2);
      const double vn = neither(g, g2);
      double adapted;
      if (g == g2) {
        adapted = tp_d * v + fp_d * vn;
      } else {
        adapted = tp_d * tp_d * v + fp_d * fp_d * vn + tp_d * fp_d * (1.0 - v - vn);
      }
      if (adapted < -1e-9 || adapted > 1.0 + 1e-9)
        throw std::runtime_error("clrz-adapted co-occurrence outside [0,1]");
      out(g, g2) = clamp_prob(adapted);
    }
  }
  return out;
}

InvertedIndex adapt_seal(const InvertedIndex& aux_index, std::uint64_t x,
                         std::uint64_t target_size) {
  if (x < 2) throw std::invalid_argument("seal padding base must be >= 2");
  if (aux_index.n_docs == 0) throw std::invalid_argument("auxiliary index has no documents");

  // Recover keyword sets per document so whole documents can be duplicated.
  std::map<DocId, std::vector<KeywordId>> keywords_of;
  for (std::size_t k = 0; k < aux_index.postings.size(); ++k)
    for (DocId d : aux_index.postings[k]) keywords_of[d].push_back(static_cast<KeywordId>(k));

  InvertedIndex out = aux_index;
  DocId next_id = 0;
  for (const auto& [d, kws] : keywords_of) next_id = std::max(next_id, d + 1);

  std::vector<const std::vector<KeywordId>*> originals;
  originals.reserve(keywords_of.size());
  for (const auto& [d, kws] : keywords_of) originals.push_back(&kws);

  std::size_t cursor = 0;
  while (out.n_docs < target_size && !originals.empty()) {
    const auto& kws = *originals[cursor % originals.size()];
    for (KeywordId k : kws) out.postings[k].push_back(next_id);
    ++next_id;
    ++out.n_docs;
    ++cursor;
  }
  for (auto& p : out.postings) std::sort(p.begin(), p.end());

  // Same padding rule as the client-side setup.
  for (auto& posting : out.postings) {
    std::uint64_t target = 1;
    while (target < std::max<std::uint64_t>(posting.size(), 1)) target *= x;
    while (posting.size() < target) posting.push_back(next_id++);
  }
  return out;
}

}  // namespace leaklab
