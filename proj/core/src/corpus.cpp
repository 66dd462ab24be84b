#include "leaklab/corpus.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "leaklab/rng.hpp"

namespace leaklab {

namespace {

const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> words = {
      "the", "and", "for", "are", "but", "not", "you", "all", "any", "can",
      "had", "her", "was", "one", "our", "out", "day", "get", "has", "him",
      "his", "how", "man", "new", "now", "old", "see", "two", "way", "who",
      "did", "its", "let", "put", "say", "she", "too", "use", "that", "with",
      "have", "this", "will", "your", "from", "they", "been", "were", "said",
      "each", "which", "their", "would", "there", "what", "about", "into",
  };
  return words;
}

std::vector<std::string> tokenize_text(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream iss(text);
  std::string tok;
  while (iss >> tok) {
    std::string norm = normalize_token(tok);
    if (!norm.empty()) tokens.push_back(std::move(norm));
  }
  return tokens;
}

struct RawDoc {
  DocId id;
  std::vector<std::string> tokens;
};

std::vector<RawDoc> read_raw(const std::filesystem::path& path, CorpusFormat format) {
  std::vector<RawDoc> raw;
  if (format == CorpusFormat::lines) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw std::runtime_error("corpus line without TAB separator");
      RawDoc doc;
      doc.id = std::stoull(line.substr(0, tab));
      doc.tokens = tokenize_text(line.substr(tab + 1));
      raw.push_back(std::move(doc));
    }
  } else {
    if (!std::filesystem::is_directory(path))
      throw std::runtime_error("corpus directory does not exist: " + path.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::ifstream in(file);
      if (!in) throw std::runtime_error("cannot open corpus file: " + file.string());
      std::stringstream buffer;
      buffer << in.rdbuf();
      RawDoc doc;
      doc.id = std::stoull(file.stem().string());
      doc.tokens = tokenize_text(buffer.str());
      raw.push_back(std::move(doc));
    }
  }
  return raw;
}

}  // namespace

std::string normalize_token(const std::string& raw) {
  std::string s;
  s.reserve(raw.size());
  for (char c : raw) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  std::size_t begin = 0, end = s.size();
  while (begin < end && !std::isalpha(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && !std::isalpha(static_cast<unsigned char>(s[end - 1]))) --end;
  s = s.substr(begin, end - begin);
  if (s.size() < 3) return {};
  if (stopwords().count(s)) return {};
  return s;
}

Corpus ingest_corpus(const std::filesystem::path& path, CorpusFormat format, std::size_t n) {
  if (n == 0) throw std::invalid_argument("universe size must be >= 1");
  std::vector<RawDoc> raw = read_raw(path, format);
  if (raw.empty()) throw std::runtime_error("empty corpus");

  // Document frequency per normalized token.
  std::map<std::string, std::uint64_t> doc_freq;
  for (auto& doc : raw) {
    std::sort(doc.tokens.begin(), doc.tokens.end());
    doc.tokens.erase(std::unique(doc.tokens.begin(), doc.tokens.end()), doc.tokens.end());
    for (const auto& t : doc.tokens) ++doc_freq[t];
  }
  if (doc_freq.size() < n)
    throw std::runtime_error("corpus has fewer distinct keywords than requested universe size");

  // Top n by (frequency desc, keyword asc). std::map gives lexicographic
  // order, so a stable sort on frequency settles ties.
  std::vector<std::pair<std::string, std::uint64_t>> ranked(doc_freq.begin(), doc_freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  ranked.resize(n);

  Corpus corpus;
  std::unordered_map<std::string, KeywordId> keyword_index;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    corpus.universe.keywords.push_back(ranked[i].first);
    keyword_index.emplace(ranked[i].first, static_cast<KeywordId>(i));
  }

  std::set<DocId> seen_ids;
  for (const auto& rawdoc : raw) {
    if (!seen_ids.insert(rawdoc.id).second)
      throw std::runtime_error("duplicate doc_id in corpus");
    Document doc;
    doc.doc_id = rawdoc.id;
    for (const auto& t : rawdoc.tokens) {
      auto it = keyword_index.find(t);
      if (it != keyword_index.end()) doc.keyword_ids.push_back(it->second);
    }
    if (doc.keyword_ids.empty()) continue;  // no universe keywords, drop
    std::sort(doc.keyword_ids.begin(), doc.keyword_ids.end());
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.documents.empty()) throw std::runtime_error("no documents carry universe keywords");
  return corpus;
}

std::pair<std::vector<Document>, std::vector<Document>> split_dataset(
    const std::vector<Document>& docs, std::uint64_t seed) {
  if (docs.size() < 2) throw std::invalid_argument("split needs at least 2 documents");
  std::vector<std::size_t> order(docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(seed, "corpus.split"));
  rng.shuffle(order);
  const std::size_t half = (docs.size() + 1) / 2;
  std::vector<Document> client, attacker;
  client.reserve(half);
  attacker.reserve(docs.size() - half);
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < half ? client : attacker).push_back(docs[order[i]]);
  return {std::move(client), std::move(attacker)};
}

InvertedIndex build_index(const std::vector<Document>& docs, const KeywordUniverse& universe) {
  InvertedIndex index;
  index.n_docs = docs.size();
  index.postings.resize(universe.size());
  for (const auto& doc : docs) {
    for (KeywordId k : doc.keyword_ids) {
      if (k >= universe.size()) throw std::out_of_range("keyword index outside universe");
      index.postings[k].push_back(doc.doc_id);
    }
  }
  for (auto& p : index.postings) std::sort(p.begin(), p.end());
  return index;
}

std::vector<std::uint64_t> posting_sizes(const InvertedIndex& index) {
  std::vector<std::uint64_t> sizes(index.postings.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) sizes[i] = index.postings[i].size();
  return sizes;
}

std::string synthetic_keyword(std::size_t i) {
  std::string word;
  std::size_t x = i;
  do {
    word.push_back(static_cast<char>('a' + x % 26));
    x /= 26;
  } while (x > 0);
  while (word.size() < 3) word.push_back('a');
  std::reverse(word.begin(), word.end());
  return word;
}

Corpus generate_synthetic_corpus(const SyntheticCorpusSpec& spec, std::uint64_t seed) {
  if (spec.n_docs < 2) throw std::invalid_argument("synthetic corpus needs >= 2 documents");
  if (spec.n_keywords == 0) throw std::invalid_argument("synthetic corpus needs >= 1 keyword");
  if (spec.doc_zipf <= 0.0) throw std::invalid_argument("doc_zipf must be > 0");

  const std::size_t n = spec.n_keywords;
  std::vector<double> rate(n);
  for (std::size_t i = 0; i < n; ++i)
    rate[i] = spec.max_doc_rate / std::pow(static_cast<double>(i + 1), spec.doc_zipf);

  Rng rng(derive_seed(seed, "corpus.synth"));

  // Correlated pairs: when the first keyword lands in a document, the second
  // follows with extra probability.
  std::vector<std::pair<KeywordId, KeywordId>> boosted;
  if (n >= 2) {
    for (std::size_t p = 0; p < spec.corr_pairs; ++p) {
      KeywordId a = static_cast<KeywordId>(rng.uniform_u64(n));
      KeywordId b = static_cast<KeywordId>(rng.uniform_u64(n - 1));
      if (b >= a) ++b;
      boosted.emplace_back(a, b);
    }
  }

  std::vector<Document> docs(spec.n_docs);
  for (std::size_t d = 0; d < spec.n_docs; ++d) {
    docs[d].doc_id = d;
    std::vector<bool> present(n, false);
    for (std::size_t i = 0; i < n; ++i)
      if (rng.bernoulli(rate[i])) present[i] = true;
    for (const auto& [a, b] : boosted)
      if (present[a] && !present[b] && rng.bernoulli(spec.corr_boost)) present[b] = true;
    for (std::size_t i = 0; i < n; ++i)
      if (present[i]) docs[d].keyword_ids.push_back(static_cast<KeywordId>(i));
  }

  // Guarantee universe coverage so downstream top-n selection keeps all n.
  std::vector<bool> covered(n, false);
  for (const auto& doc : docs)
    for (KeywordId k : doc.keyword_ids) covered[k] = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!covered[i]) {
      auto& ids = docs[i % docs.size()].keyword_ids;
      ids.insert(std::lower_bound(ids.begin(), ids.end(), static_cast<KeywordId>(i)),
                 static_cast<KeywordId>(i));
    }
  }

  Corpus corpus;
  for (auto& doc : docs)
    if (!doc.keyword_ids.empty()) corpus.documents.push_back(std::move(doc));
  for (std::size_t i = 0; i < n; ++i)
    corpus.universe.keywords.push_back(synthetic_keyword(i));
  return corpus;
}

}  // namespace leaklab
