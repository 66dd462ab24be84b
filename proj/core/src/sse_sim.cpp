#include "leaklab/sse_sim.hpp"

#include <set>

#include "leaklab/rng.hpp"

namespace leaklab {

namespace {

std::uint64_t next_power_of(std::uint64_t x, std::uint64_t value) {
  std::uint64_t p = 1;
  while (p < value) p *= x;
  return p;
}

std::vector<DocId> collect_doc_ids(const InvertedIndex& index) {
  std::set<DocId> ids;
  for (const auto& posting : index.postings) ids.insert(posting.begin(), posting.end());
  return {ids.begin(), ids.end()};
}

}  // namespace

InvertedIndex setup_edb(const InvertedIndex& index, const DefenseConfig& defense,
                        std::uint64_t seed) {
  defense.validate();
  if (defense.kind == DefenseKind::none) return index;

  InvertedIndex out;
  out.n_docs = index.n_docs;
  out.postings.resize(index.postings.size());

  if (defense.kind == DefenseKind::clrz) {
    const std::vector<DocId> docs = collect_doc_ids(index);
    Rng rng(derive_seed(seed, "defense.clrz"));
    for (std::size_t k = 0; k < index.postings.size(); ++k) {
      const auto& truth = index.postings[k];
      auto& obfuscated = out.postings[k];
      std::size_t t = 0;
      for (DocId d : docs) {
        while (t < truth.size() && truth[t] < d) ++t;
        const bool present = t < truth.size() && truth[t] == d;
        if (present ? rng.bernoulli(defense.tpr) : rng.bernoulli(defense.fpr))
          obfuscated.push_back(d);
      }
    }
    return out;
  }

  // seal: pad each posting to the smallest power of x >= its size with
  // per-keyword dummy ids past every real id.
  DocId next_dummy = 0;
  for (const auto& posting : index.postings)
    for (DocId d : posting) next_dummy = std::max(next_dummy, d + 1);
  for (std::size_t k = 0; k < index.postings.size(); ++k) {
    auto& posting = out.postings[k];
    posting = index.postings[k];
    const std::uint64_t target = next_power_of(defense.x, std::max<std::uint64_t>(posting.size(), 1));
    while (posting.size() < target) posting.push_back(next_dummy++);
  }
  return out;
}

LeakageSimulator::LeakageSimulator(InvertedIndex edb) : edb_(std::move(edb)) {
  sizes_.resize(edb_.postings.size());
  for (std::size_t i = 0; i < sizes_.size(); ++i) sizes_[i] = edb_.postings[i].size();
}

KeywordId LeakageSimulator::sterm_of(const Conjunction& conj) const {
  return select_sterm(conj, sizes_);
}

LeakageRecord LeakageSimulator::answer_query(const Conjunction& conj) {
  for (KeywordId k : conj.keyword_ids())
    if (k >= edb_.postings.size()) throw std::out_of_range("query keyword outside index");

  const KeywordId sterm = sterm_of(conj);

  TokenId full;
  auto it = full_token_of_.find(conj);
  if (it != full_token_of_.end()) {
    full = it->second;
  } else {
    full = full_token_of_.size();
    full_token_of_.emplace(conj, full);
    ledger_.conjunction_of.emplace(full, conj);
    result_cache_.emplace(
        full, std::make_shared<const std::vector<DocId>>(docs_matching(edb_, conj)));

    TokenId stok;
    auto sit = sterm_token_of_.find(sterm);
    if (sit != sterm_token_of_.end()) {
      stok = sit->second;
    } else {
      stok = sterm_token_of_.size();
      sterm_token_of_.emplace(sterm, stok);
      ledger_.sterm_keyword_of.emplace(stok, sterm);
    }
    sterm_token_of_full_.emplace(full, stok);
  }

  LeakageRecord record;
  record.token.full_token = full;
  record.token.sterm_token = sterm_token_of_full_.at(full);
  record.sterm_volume = sizes_[sterm];
  record.result_ids = result_cache_.at(full);
  return record;
}

}  // namespace leaklab
