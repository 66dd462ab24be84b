#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace leaklab {

using KeywordId = std::uint32_t;
using DocId = std::uint64_t;
using TokenId = std::uint64_t;

/// A conjunction of keywords, stored inline as a sorted, duplicate-free id
/// list. Dimension 1 models single-keyword queries.
class Conjunction {
 public:
  static constexpr std::size_t kMaxDim = 8;

  Conjunction() = default;
  explicit Conjunction(std::span<const KeywordId> ids) {
    if (ids.empty()) throw std::invalid_argument("conjunction must not be empty");
    if (ids.size() > kMaxDim) throw std::invalid_argument("conjunction dimension too large");
    size_ = static_cast<std::uint8_t>(ids.size());
    std::copy(ids.begin(), ids.end(), ids_.begin());
    std::sort(ids_.begin(), ids_.begin() + size_);
    auto last = std::unique(ids_.begin(), ids_.begin() + size_);
    size_ = static_cast<std::uint8_t>(last - ids_.begin());
  }
  Conjunction(std::initializer_list<KeywordId> ids)
      : Conjunction(std::span<const KeywordId>(ids.begin(), ids.size())) {}
  explicit Conjunction(const std::vector<KeywordId>& ids)
      : Conjunction(std::span<const KeywordId>(ids)) {}

  std::size_t dim() const { return size_; }
  std::span<const KeywordId> keyword_ids() const { return {ids_.data(), size_}; }
  KeywordId operator[](std::size_t i) const { return ids_[i]; }
  bool contains(KeywordId k) const {
    return std::binary_search(ids_.begin(), ids_.begin() + size_, k);
  }
  /// This conjunction with keyword `k` removed (must be present, dim >= 2).
  Conjunction without(KeywordId k) const {
    std::vector<KeywordId> rest;
    for (std::size_t i = 0; i < size_; ++i)
      if (ids_[i] != k) rest.push_back(ids_[i]);
    return Conjunction(rest);
  }

  friend bool operator==(const Conjunction& a, const Conjunction& b) {
    return a.size_ == b.size_ &&
           std::equal(a.ids_.begin(), a.ids_.begin() + a.size_, b.ids_.begin());
  }
  friend std::strong_ordering operator<=>(const Conjunction& a, const Conjunction& b) {
    return std::lexicographical_compare_three_way(
        a.ids_.begin(), a.ids_.begin() + a.size_, b.ids_.begin(), b.ids_.begin() + b.size_);
  }

 private:
  std::array<KeywordId, kMaxDim> ids_{};
  std::uint8_t size_ = 0;
};

struct ConjunctionHash {
  std::size_t operator()(const Conjunction& c) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (KeywordId k : c.keyword_ids()) {
      h ^= k;
      h *= 0x100000001b3ULL;
    }
    h ^= c.dim();
    h *= 0x100000001b3ULL;
    return static_cast<std::size_t>(h);
  }
};

/// Dense row-major matrix of doubles. Small helper; no linear algebra.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Document {
  DocId doc_id = 0;
  std::vector<KeywordId> keyword_ids;  // sorted, unique
};

struct KeywordUniverse {
  std::vector<std::string> keywords;  // canonical index order
  std::size_t size() const { return keywords.size(); }
};

/// Keyword -> sorted document id lists over one dataset half. Padding
/// defenses may append dummy ids beyond any real document id; n_docs always
/// counts real documents only.
struct InvertedIndex {
  std::uint64_t n_docs = 0;
  std::vector<std::vector<DocId>> postings;  // one sorted list per keyword

  std::size_t n_keywords() const { return postings.size(); }
  std::uint64_t posting_size(KeywordId k) const { return postings.at(k).size(); }
};

/// Intersection of the postings of every keyword in `conj`.
std::vector<DocId> docs_matching(const InvertedIndex& index, const Conjunction& conj);

/// Number of elements common to two sorted id lists.
std::uint64_t intersection_size(std::span<const DocId> a, std::span<const DocId> b);

/// Number of elements in the union of two sorted id lists.
std::uint64_t union_size(std::span<const DocId> a, std::span<const DocId> b);

/// The keyword of `conj` with the fewest matching documents per
/// `posting_sizes`; ties go to the smaller keyword index. Both the simulated
/// client and the attack use this one rule so their rankings agree whenever
/// their frequency knowledge does.
KeywordId select_sterm(const Conjunction& conj, std::span<const std::uint64_t> posting_sizes);

enum class DefenseKind { none, clrz, seal };

struct DefenseConfig {
  DefenseKind kind = DefenseKind::none;
  double tpr = 1.0;     // clrz: probability a true incidence is kept
  double fpr = 0.0;     // clrz: probability a false incidence is added
  std::uint64_t x = 2;  // seal: padding base

  void validate() const {
    if (fpr < 0.0 || tpr > 1.0 || fpr > tpr)
      throw std::invalid_argument("defense requires 0 <= fpr <= tpr <= 1");
    if (kind == DefenseKind::seal && x < 2)
      throw std::invalid_argument("seal padding base must be >= 2");
  }
};

/// Query workload shape: fixed-dimension queries or a mixture over 1..d_max.
struct QuerySetting {
  enum class Kind { separate, hybrid };
  Kind kind = Kind::separate;
  std::uint32_t dim = 2;          // separate only
  std::uint32_t d_max = 2;        // hybrid only
  std::vector<double> dim_probs;  // hybrid: P_d over dimensions 1..d_max

  static QuerySetting separate(std::uint32_t d) {
    QuerySetting s;
    s.kind = Kind::separate;
    s.dim = d;
    return s;
  }
  static QuerySetting hybrid(std::uint32_t d_max, std::vector<double> pd = {});
  /// Dimensions this setting can emit (nonzero probability).
  std::vector<std::uint32_t> active_dims() const;
  std::uint32_t max_dim() const { return kind == Kind::separate ? dim : d_max; }
  void validate() const;
};

inline constexpr double kProbEps = 1e-6;  // clamp for probabilities fed to logs

inline double clamp_prob(double p) {
  return std::clamp(p, kProbEps, 1.0 - kProbEps);
}

}  // namespace leaklab
