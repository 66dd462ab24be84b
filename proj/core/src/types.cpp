#include "leaklab/types.hpp"

#include <limits>

namespace leaklab {

std::vector<DocId> docs_matching(const InvertedIndex& index, const Conjunction& conj) {
  const auto& ids = conj.keyword_ids();
  for (KeywordId k : ids) {
    if (k >= index.postings.size())
      throw std::out_of_range("conjunction keyword outside index");
  }
  std::vector<DocId> acc = index.postings[ids[0]];
  std::vector<DocId> next;
  for (std::size_t i = 1; i < ids.size() && !acc.empty(); ++i) {
    const auto& p = index.postings[ids[i]];
    next.clear();
    std::set_intersection(acc.begin(), acc.end(), p.begin(), p.end(), std::back_inserter(next));
    acc.swap(next);
  }
  return acc;
}

std::uint64_t intersection_size(std::span<const DocId> a, std::span<const DocId> b) {
  std::uint64_t count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (b[j] < a[i])
      ++j;
    else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::uint64_t union_size(std::span<const DocId> a, std::span<const DocId> b) {
  return a.size() + b.size() - intersection_size(a, b);
}

KeywordId select_sterm(const Conjunction& conj, std::span<const std::uint64_t> posting_sizes) {
  KeywordId best = conj.keyword_ids().front();
  std::uint64_t best_size = std::numeric_limits<std::uint64_t>::max();
  for (KeywordId k : conj.keyword_ids()) {
    if (k >= posting_sizes.size())
      throw std::out_of_range("keyword outside posting size vector");
    if (posting_sizes[k] < best_size) {
      best = k;
      best_size = posting_sizes[k];
    }
  }
  return best;
}

QuerySetting QuerySetting::hybrid(std::uint32_t d_max, std::vector<double> pd) {
  QuerySetting s;
  s.kind = Kind::hybrid;
  s.d_max = d_max;
  if (pd.empty())
    pd.assign(d_max, 1.0 / static_cast<double>(d_max));  // uniform default
  s.dim_probs = std::move(pd);
  s.validate();
  return s;
}

std::vector<std::uint32_t> QuerySetting::active_dims() const {
  std::vector<std::uint32_t> dims;
  if (kind == Kind::separate) {
    dims.push_back(dim);
  } else {
    for (std::uint32_t k = 1; k <= d_max; ++k)
      if (dim_probs[k - 1] > 0.0) dims.push_back(k);
  }
  return dims;
}

void QuerySetting::validate() const {
  if (kind == Kind::separate) {
    if (dim < 1) throw std::invalid_argument("separate setting needs dim >= 1");
    return;
  }
  if (d_max < 1) throw std::invalid_argument("hybrid setting needs d_max >= 1");
  if (dim_probs.size() != d_max)
    throw std::invalid_argument("hybrid P_d must have d_max entries");
  double sum = 0.0;
  for (double p : dim_probs) {
    if (p < 0.0) throw std::invalid_argument("hybrid P_d entries must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("hybrid P_d must sum to 1");
}

}  // namespace leaklab
