#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "leaklab/types.hpp"

namespace leaklab {

enum class CorpusFormat {
  lines,      // one document per line: doc_id TAB space-separated tokens
  directory,  // one plain-text file per document, filename stem = doc_id
};

struct Corpus {
  std::vector<Document> documents;
  KeywordUniverse universe;
};

/// Lowercases, trims non-alphabetic edges, drops tokens shorter than three
/// characters and a fixed stopword list. Returns the empty string for tokens
/// that do not survive. Client and attacker share this normalizer.
std::string normalize_token(const std::string& raw);

/// Reads a corpus and keeps the top `n` keywords by document frequency
/// (ties broken lexicographically). Documents are reduced to universe
/// keywords; documents left empty are dropped.
Corpus ingest_corpus(const std::filesystem::path& path, CorpusFormat format, std::size_t n);

/// Disjoint halves whose sizes differ by at most one; deterministic in seed.
std::pair<std::vector<Document>, std::vector<Document>> split_dataset(
    const std::vector<Document>& docs, std::uint64_t seed);

InvertedIndex build_index(const std::vector<Document>& docs, const KeywordUniverse& universe);

/// Per-keyword document counts of an index (real and dummy entries alike).
std::vector<std::uint64_t> posting_sizes(const InvertedIndex& index);

struct SyntheticCorpusSpec {
  std::size_t n_docs = 2000;
  std::size_t n_keywords = 100;
  double doc_zipf = 0.8;      // document-frequency decay over keyword rank
  double max_doc_rate = 0.4;  // document frequency of the top keyword
  std::size_t corr_pairs = 0; // keyword pairs with boosted co-occurrence
  double corr_boost = 0.3;    // extra inclusion probability for boosted pairs
};

/// Deterministic stand-in for a real text corpus: Zipf-decaying per-keyword
/// document rates with optional pairwise correlation injection. Every keyword
/// is guaranteed to appear in at least one document.
Corpus generate_synthetic_corpus(const SyntheticCorpusSpec& spec, std::uint64_t seed);

/// Deterministic pseudo-word for a keyword index ("aaa", "aab", ...).
std::string synthetic_keyword(std::size_t i);

}  // namespace leaklab
