#include "leaklab/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace leaklab {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read file: " + path.string());
  return in;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream iss(s);
  while (std::getline(iss, part, sep)) parts.push_back(part);
  return parts;
}

std::string format_double(double v) {
  std::ostringstream oss;
  oss.precision(17);
  oss << v;
  return oss.str();
}

}  // namespace

void write_corpus_lines(const std::filesystem::path& path, const Corpus& corpus) {
  auto out = open_out(path);
  for (const auto& doc : corpus.documents) {
    out << doc.doc_id << '\t';
    bool first = true;
    for (KeywordId k : doc.keyword_ids) {
      if (!first) out << ' ';
      out << corpus.universe.keywords.at(k);
      first = false;
    }
    out << '\n';
  }
}

void write_universe(const std::filesystem::path& path, const KeywordUniverse& universe) {
  auto out = open_out(path);
  for (const auto& kw : universe.keywords) out << kw << '\n';
}

KeywordUniverse read_universe(const std::filesystem::path& path) {
  auto in = open_in(path);
  KeywordUniverse universe;
  std::string line;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!seen.insert(line).second) throw std::runtime_error("duplicate keyword in universe file");
    universe.keywords.push_back(line);
  }
  if (universe.keywords.empty()) throw std::runtime_error("empty universe file");
  return universe;
}

void write_frequency_table(const std::filesystem::path& path, const FrequencyModel& model,
                           const KeywordUniverse& universe) {
  auto out = open_out(path);
  out << "# query frequency table; sum of probabilities = 1\n";
  for (const auto& [c, p] : model.table) {
    bool first = true;
    for (KeywordId k : c.keyword_ids()) {
      if (!first) out << ',';
      out << universe.keywords.at(k);
      first = false;
    }
    out << '\t' << format_double(p) << '\n';
  }
}

FrequencyModel read_frequency_table(const std::filesystem::path& path,
                                    const KeywordUniverse& universe) {
  auto in = open_in(path);
  std::unordered_map<std::string, KeywordId> index;
  for (std::size_t i = 0; i < universe.keywords.size(); ++i)
    index.emplace(universe.keywords[i], static_cast<KeywordId>(i));

  FrequencyModel model;
  std::string line;
  double sum = 0.0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::runtime_error("frequency line without TAB");
    std::vector<KeywordId> ids;
    for (const auto& name : split(line.substr(0, tab), ',')) {
      auto it = index.find(name);
      if (it == index.end())
        throw std::runtime_error("frequency file keyword not in universe: " + name);
      ids.push_back(it->second);
    }
    const double p = std::stod(line.substr(tab + 1));
    if (p < 0.0) throw std::runtime_error("negative frequency entry");
    Conjunction c(ids);
    if (!model.table.emplace(c, p).second)
      throw std::runtime_error("duplicate conjunction in frequency file");
    model.d_max = std::max<std::uint32_t>(model.d_max, static_cast<std::uint32_t>(c.dim()));
    sum += p;
  }
  if (model.table.empty()) throw std::runtime_error("empty frequency file");
  if (std::abs(sum - 1.0) > 1e-6)
    throw std::runtime_error("frequency file does not sum to 1 within 1e-6");
  for (auto& [c, p] : model.table) p /= sum;
  return model;
}

std::string trace_to_string(const LeakageTrace& trace) {
  std::ostringstream out;
  for (const auto& record : trace) {
    out << record.token.full_token << '\t' << record.token.sterm_token << '\t'
        << record.sterm_volume << '\t';
    bool first = true;
    for (DocId d : record.results()) {
      if (!first) out << ',';
      out << d;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

void write_trace(const std::filesystem::path& path, const LeakageTrace& trace) {
  auto out = open_out(path);
  out << trace_to_string(trace);
}

LeakageTrace read_trace(const std::filesystem::path& path) {
  auto in = open_in(path);
  LeakageTrace trace;
  std::map<TokenId, std::shared_ptr<const std::vector<DocId>>> shared;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() < 3) throw std::runtime_error("trace line with too few columns");
    LeakageRecord record;
    record.token.full_token = std::stoull(cols[0]);
    record.token.sterm_token = std::stoull(cols[1]);
    record.sterm_volume = std::stoull(cols[2]);
    auto it = shared.find(record.token.full_token);
    if (it != shared.end()) {
      record.result_ids = it->second;
    } else {
      std::vector<DocId> ids;
      if (cols.size() >= 4 && !cols[3].empty())
        for (const auto& part : split(cols[3], ',')) ids.push_back(std::stoull(part));
      auto ptr = std::make_shared<const std::vector<DocId>>(std::move(ids));
      shared.emplace(record.token.full_token, ptr);
      record.result_ids = ptr;
    }
    trace.push_back(std::move(record));
  }
  return trace;
}

void write_ledger(const std::filesystem::path& path, const GroundTruthLedger& ledger) {
  auto out = open_out(path);
  for (const auto& [token, conj] : ledger.conjunction_of) {
    out << "full\t" << token << '\t';
    bool first = true;
    for (KeywordId k : conj.keyword_ids()) {
      if (!first) out << ',';
      out << k;
      first = false;
    }
    out << '\n';
  }
  for (const auto& [token, kw] : ledger.sterm_keyword_of)
    out << "sterm\t" << token << '\t' << kw << '\n';
}

GroundTruthLedger read_ledger(const std::filesystem::path& path) {
  auto in = open_in(path);
  GroundTruthLedger ledger;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() != 3) throw std::runtime_error("malformed ledger line");
    const TokenId token = std::stoull(cols[1]);
    if (cols[0] == "full") {
      std::vector<KeywordId> ids;
      for (const auto& part : split(cols[2], ','))
        ids.push_back(static_cast<KeywordId>(std::stoul(part)));
      ledger.conjunction_of.emplace(token, Conjunction(ids));
    } else if (cols[0] == "sterm") {
      ledger.sterm_keyword_of.emplace(token, static_cast<KeywordId>(std::stoul(cols[2])));
    } else {
      throw std::runtime_error("unknown ledger record kind: " + cols[0]);
    }
  }
  return ledger;
}

void write_workload(const std::filesystem::path& path, std::span<const Conjunction> queries) {
  auto out = open_out(path);
  for (const auto& q : queries) {
    bool first = true;
    for (KeywordId k : q.keyword_ids()) {
      if (!first) out << ' ';
      out << k;
      first = false;
    }
    out << '\n';
  }
}

void write_mappings(const std::filesystem::path& path, const StermMapping& sterm,
                    const QueryMapping& full) {
  auto out = open_out(path);
  for (const auto& [token, kw] : sterm.keyword_of) out << "s\t" << token << '\t' << kw << '\n';
  for (const auto& [token, conj] : full.conjunction_of) {
    out << "q\t" << token << '\t';
    bool first = true;
    for (KeywordId k : conj.keyword_ids()) {
      if (!first) out << ',';
      out << k;
      first = false;
    }
    out << '\n';
  }
}

std::pair<StermMapping, QueryMapping> read_mappings(const std::filesystem::path& path) {
  auto in = open_in(path);
  StermMapping sterm;
  QueryMapping full;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() != 3) throw std::runtime_error("malformed mapping line");
    const TokenId token = std::stoull(cols[1]);
    if (cols[0] == "s") {
      sterm.keyword_of.emplace(token, static_cast<KeywordId>(std::stoul(cols[2])));
    } else if (cols[0] == "q") {
      std::vector<KeywordId> ids;
      for (const auto& part : split(cols[2], ','))
        ids.push_back(static_cast<KeywordId>(std::stoul(part)));
      full.conjunction_of.emplace(token, Conjunction(ids));
    } else {
      throw std::runtime_error("unknown mapping record kind: " + cols[0]);
    }
  }
  return {std::move(sterm), std::move(full)};
}

void write_attack_report(const std::filesystem::path& path, const LeakageTrace& trace,
                         const QueryMapping& full, const GroundTruthLedger& ledger) {
  auto out = open_out(path);
  std::set<TokenId> done;
  auto keyword_list = [](const Conjunction& c) {
    std::string s;
    for (KeywordId k : c.keyword_ids()) {
      if (!s.empty()) s += ',';
      s += std::to_string(k);
    }
    return s;
  };
  for (const auto& record : trace) {
    if (!done.insert(record.token.full_token).second) continue;
    const Conjunction& truth = ledger.conjunction_of.at(record.token.full_token);
    auto pred = full.conjunction_of.find(record.token.full_token);
    std::string predicted = "-";
    std::size_t hits = 0;
    if (pred != full.conjunction_of.end()) {
      predicted = keyword_list(pred->second);
      for (KeywordId k : truth.keyword_ids())
        if (pred->second.contains(k)) ++hits;
    }
    out << record.token.full_token << '\t' << predicted << '\t' << keyword_list(truth) << '\t'
        << hits << '\n';
  }
}

std::string metrics_to_kv(const MetricsReport& report) {
  std::ostringstream out;
  out << "total_queries " << report.total_queries << '\n';
  out << "total_keywords " << report.total_keywords << '\n';
  out << "s_acc " << format_double(report.s_acc) << '\n';
  out << "f_acc " << format_double(report.f_acc) << '\n';
  out << "l_acc " << format_double(report.l_acc) << '\n';
  for (std::size_t x = 0; x < report.cad.size(); ++x)
    out << "cad_" << (x + 1) << ' ' << format_double(report.cad[x]) << '\n';
  for (const auto& [d, slice] : report.per_dimension) {
    out << "dim" << d << ".queries " << slice.queries << '\n';
    out << "dim" << d << ".s_acc " << format_double(slice.s_acc) << '\n';
    out << "dim" << d << ".f_acc " << format_double(slice.f_acc) << '\n';
    out << "dim" << d << ".l_acc " << format_double(slice.l_acc) << '\n';
  }
  return out.str();
}

void write_metrics(const std::filesystem::path& path, const MetricsReport& report) {
  auto out = open_out(path);
  out << metrics_to_kv(report);
}

}  // namespace leaklab
