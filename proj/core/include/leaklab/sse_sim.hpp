#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "leaklab/types.hpp"

namespace leaklab {

/// Opaque token pair issued per query. Ids only support equality; equal
/// full tokens imply equal underlying conjunctions, equal s-term tokens
/// imply equal underlying s-term keywords.
struct QueryToken {
  TokenId full_token = 0;
  TokenId sterm_token = 0;
};

/// What the server observes for one query. result_ids is shared between
/// repeats of the same token to keep large traces affordable.
struct LeakageRecord {
  QueryToken token;
  std::uint64_t sterm_volume = 0;
  std::shared_ptr<const std::vector<DocId>> result_ids;

  const std::vector<DocId>& results() const { return *result_ids; }
};

using LeakageTrace = std::vector<LeakageRecord>;

/// Sealed ground truth. Only the metrics module may consult this.
struct GroundTruthLedger {
  std::map<TokenId, Conjunction> conjunction_of;   // full token -> conjunction
  std::map<TokenId, KeywordId> sterm_keyword_of;   // s-term token -> keyword
};

/// Applies the configured defense to an index at setup time. none returns a
/// copy; clrz keeps true incidences with probability TPR and adds false ones
/// with probability FPR; seal pads every posting with fresh dummy ids up to
/// the smallest power of x >= its size. Dummy ids never collide with real
/// documents or with other keywords' dummies; n_docs stays the real count.
InvertedIndex setup_edb(const InvertedIndex& index, const DefenseConfig& defense,
                        std::uint64_t seed);

/// Single-writer query oracle over a (possibly defended) index. Token ids
/// are sequential at first issuance; the same conjunction always yields the
/// same token pair.
class LeakageSimulator {
 public:
  explicit LeakageSimulator(InvertedIndex edb);

  /// s-term by defended posting sizes; ties to the smaller keyword index.
  KeywordId sterm_of(const Conjunction& conj) const;

  LeakageRecord answer_query(const Conjunction& conj);

  const InvertedIndex& edb() const { return edb_; }
  const GroundTruthLedger& ledger() const { return ledger_; }

 private:
  InvertedIndex edb_;
  std::vector<std::uint64_t> sizes_;
  std::map<Conjunction, TokenId> full_token_of_;
  std::map<KeywordId, TokenId> sterm_token_of_;
  std::map<TokenId, std::shared_ptr<const std::vector<DocId>>> result_cache_;
  std::map<TokenId, TokenId> sterm_token_of_full_;
  GroundTruthLedger ledger_;
};

}  // namespace leaklab
