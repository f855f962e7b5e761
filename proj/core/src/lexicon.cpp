#include "wordladders/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "wordladders/error.hpp"

namespace wordladders {
namespace {

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(trim(line.substr(start, tab == std::string_view::npos ? tab : tab - start)));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank_or_comment(std::string_view line) {
  const std::string t = trim(line);
  return t.empty() || t.front() == '#';
}

double parse_number(const std::string& text, std::string_view column, std::size_t line) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw ParseError("column '" + std::string(column) + "' is not a number: '" + text + "'", line);
  }
  return value;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open " + path.string());
  return in;
}

}  // namespace

CycleError::CycleError(std::vector<std::string> cycle)
    : Error([&] {
        std::string msg = "taxonomy cycle:";
        for (std::size_t i = 0; i < cycle.size(); ++i) msg += (i ? " -> " : " ") + cycle[i];
        return msg;
      }()),
      cycle_(std::move(cycle)) {}

std::string_view to_string(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::noun: return "noun";
    case PartOfSpeech::verb: return "verb";
    case PartOfSpeech::adjective: return "adjective";
  }
  return "noun";
}

std::optional<PartOfSpeech> parse_pos(std::string_view text) {
  const std::string t = normalize_lemma(text);
  if (t == "noun" || t == "n") return PartOfSpeech::noun;
  if (t == "verb" || t == "v") return PartOfSpeech::verb;
  if (t == "adjective" || t == "adj" || t == "a") return PartOfSpeech::adjective;
  return std::nullopt;
}

NormsLoad parse_norms(std::istream& in, Language lang) {
  static const std::vector<std::string> kHeader = {"lemma", "pos", "concreteness", "frequency",
                                                   "familiarity"};
  NormsLoad result;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::set<std::tuple<std::string, PartOfSpeech>> seen;

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (trim(line).empty()) continue;
    auto cols = split_tabs(line);
    if (!header_seen) {
      for (auto& c : cols) c = normalize_lemma(c);
      if (cols != kHeader) {
        throw ParseError("expected header 'lemma\\tpos\\tconcreteness\\tfrequency\\tfamiliarity'",
                         line_no);
      }
      header_seen = true;
      continue;
    }
    if (cols.size() != kHeader.size()) {
      throw ParseError("expected 5 tab-separated columns, got " + std::to_string(cols.size()),
                       line_no);
    }
    LexicalEntry e;
    e.language = lang;
    e.lemma = normalize_lemma(cols[0]);
    if (e.lemma.empty()) throw ParseError("empty lemma", line_no);
    const auto pos = parse_pos(cols[1]);
    if (!pos) throw ParseError("unknown part of speech '" + cols[1] + "'", line_no);
    e.pos = *pos;
    e.concreteness = parse_number(cols[2], "concreteness", line_no);
    e.frequency = parse_number(cols[3], "frequency", line_no);
    e.familiarity = parse_number(cols[4], "familiarity", line_no);

    if (e.concreteness < 1.0 || e.concreteness > 5.0) {
      result.warnings.push_back({line_no, "concreteness " + cols[2] + " outside [1,5]; row skipped"});
      continue;
    }
    if (e.frequency < 0.0) {
      result.warnings.push_back({line_no, "negative frequency; row skipped"});
      continue;
    }
    if (e.familiarity < 1.0 || e.familiarity > 7.0) {
      result.warnings.push_back({line_no, "familiarity " + cols[4] + " outside [1,7]; row skipped"});
      continue;
    }
    if (!seen.emplace(e.lemma, e.pos).second) {
      result.warnings.push_back({line_no, "duplicate entry '" + e.lemma + "'; row skipped"});
      continue;
    }
    result.entries.push_back(std::move(e));
  }
  if (!header_seen) throw ParseError("missing header", line_no);
  return result;
}

NormsLoad load_norms(const std::filesystem::path& path, Language lang) {
  auto in = open_input(path);
  return parse_norms(in, lang);
}

void write_norms(std::ostream& out, const std::vector<LexicalEntry>& entries) {
  out << "lemma\tpos\tconcreteness\tfrequency\tfamiliarity\n";
  for (const auto& e : entries) {
    out << e.lemma << '\t' << to_string(e.pos) << '\t' << format_number(e.concreteness) << '\t'
        << format_number(e.frequency) << '\t' << format_number(e.familiarity) << '\n';
  }
}

std::unordered_set<std::string> parse_blocklist(std::istream& in) {
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (is_blank_or_comment(line)) continue;
    out.insert(normalize_lemma(line));
  }
  return out;
}

std::unordered_set<std::string> load_blocklist(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_blocklist(in);
}

std::vector<LexicalEntry> apply_blocklist(std::vector<LexicalEntry> entries,
                                          const std::unordered_set<std::string>& blocklist) {
  for (auto& e : entries) {
    if (blocklist.count(e.lemma)) e.blocked = true;
  }
  return entries;
}

// --- KnowledgeBase ---------------------------------------------------------

KnowledgeBase::KnowledgeBase(Language lang, std::vector<TaxonomyEdge> edges)
    : language_(lang) {
  std::set<std::pair<std::string, std::string>> unique;
  for (auto& e : edges) {
    e.hyponym = normalize_lemma(e.hyponym);
    e.hypernym = normalize_lemma(e.hypernym);
    e.language = lang;
    if (e.hyponym.empty() || e.hypernym.empty()) throw ValidationError("taxonomy edge with empty lemma");
    if (e.hyponym == e.hypernym) throw ValidationError("self-loop on '" + e.hyponym + "'");
    if (!unique.emplace(e.hyponym, e.hypernym).second) continue;
    up_[e.hyponym].push_back(e.hypernym);
    down_[e.hypernym].push_back(e.hyponym);
    up_.try_emplace(e.hypernym);
    down_.try_emplace(e.hyponym);
    edges_.push_back(std::move(e));
  }

  // Iterative three-colour DFS over hypernym links.
  enum Colour : char { white, grey, black };
  std::unordered_map<std::string, Colour> colour;
  std::unordered_map<std::string, std::string> parent;
  for (const auto& [start, unused] : up_) {
    if (colour[start] != white) continue;
    std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
    colour[start] = grey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& parents = up_.at(node);
      if (next == parents.size()) {
        colour[node] = black;
        stack.pop_back();
        continue;
      }
      const std::string& target = parents[next++];
      const Colour c = colour[target];
      if (c == grey) {
        std::vector<std::string> cycle{target};
        for (auto it = stack.rbegin(); it != stack.rend() && it->first != target; ++it) {
          cycle.push_back(it->first);
        }
        cycle.push_back(target);
        std::reverse(cycle.begin(), cycle.end());
        throw CycleError(std::move(cycle));
      }
      if (c == white) {
        colour[target] = grey;
        stack.emplace_back(target, 0);
      }
    }
  }
}

bool KnowledgeBase::contains(std::string_view lemma) const {
  return up_.count(std::string(lemma)) > 0;
}

const std::vector<std::string>& KnowledgeBase::hypernyms_of(std::string_view lemma) const {
  static const std::vector<std::string> kEmpty;
  const auto it = up_.find(std::string(lemma));
  return it == up_.end() ? kEmpty : it->second;
}

const std::vector<std::string>& KnowledgeBase::hyponyms_of(std::string_view lemma) const {
  static const std::vector<std::string> kEmpty;
  const auto it = down_.find(std::string(lemma));
  return it == down_.end() ? kEmpty : it->second;
}

bool KnowledgeBase::has_edge(std::string_view hyponym, std::string_view hypernym) const {
  const auto& ups = hypernyms_of(hyponym);
  return std::find(ups.begin(), ups.end(), hypernym) != ups.end();
}

bool KnowledgeBase::reaches(std::string_view specific, std::string_view generic) const {
  if (specific == generic) return false;
  std::unordered_set<std::string> visited;
  std::deque<std::string> queue{std::string(specific)};
  while (!queue.empty()) {
    const std::string node = std::move(queue.front());
    queue.pop_front();
    for (const auto& next : hypernyms_of(node)) {
      if (next == generic) return true;
      if (visited.insert(next).second) queue.push_back(next);
    }
  }
  return false;
}

int KnowledgeBase::longest_chain(const Adjacency& adj, std::string_view lemma, int cap) const {
  if (cap <= 0 || !adj.count(std::string(lemma))) return 0;
  // Post-order over the sub-DAG reachable from `lemma`.
  std::unordered_map<std::string, int> depth;
  std::vector<std::pair<std::string, std::size_t>> stack{{std::string(lemma), 0}};
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    const auto& out = adj.at(node);
    if (next < out.size()) {
      const std::string& child = out[next++];
      if (!depth.count(child)) stack.emplace_back(child, 0);
      continue;
    }
    int best = 0;
    for (const auto& child : out) best = std::max(best, 1 + depth.at(child));
    depth[node] = best;
    stack.pop_back();
  }
  return std::min(depth.at(std::string(lemma)), cap);
}

int KnowledgeBase::longest_chain_up(std::string_view lemma, int cap) const {
  return longest_chain(up_, lemma, cap);
}

int KnowledgeBase::longest_chain_down(std::string_view lemma, int cap) const {
  return longest_chain(down_, lemma, cap);
}

TaxonomyLoad parse_taxonomy(std::istream& in, Language lang) {
  std::vector<TaxonomyEdge> edges;
  std::vector<LoadWarning> warnings;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank_or_comment(line)) continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 2) {
      throw ParseError("expected 'hyponym<TAB>hypernym', got " + std::to_string(cols.size()) +
                           " columns",
                       line_no);
    }
    TaxonomyEdge e{normalize_lemma(cols[0]), normalize_lemma(cols[1]), lang};
    if (e.hyponym.empty() || e.hypernym.empty()) throw ParseError("empty lemma", line_no);
    if (e.hyponym == e.hypernym) {
      warnings.push_back({line_no, "self-loop '" + e.hyponym + "'; row rejected"});
      continue;
    }
    if (!seen.emplace(e.hyponym, e.hypernym).second) {
      warnings.push_back({line_no, "duplicate edge; row skipped"});
      continue;
    }
    edges.push_back(std::move(e));
  }
  return {KnowledgeBase(lang, std::move(edges)), std::move(warnings)};
}

TaxonomyLoad load_taxonomy(const std::filesystem::path& path, Language lang) {
  auto in = open_input(path);
  return parse_taxonomy(in, lang);
}

bool is_generalization(const KnowledgeBase& kb, std::string_view specific,
                       std::string_view generic, ValidityMode mode) {
  if (specific == generic) return false;
  return mode == ValidityMode::direct ? kb.has_edge(specific, generic)
                                      : kb.reaches(specific, generic);
}

std::vector<LexicalEntry> retain_known(std::vector<LexicalEntry> entries,
                                       const KnowledgeBase& kb) {
  std::erase_if(entries, [&](const LexicalEntry& e) { return !kb.contains(e.lemma); });
  return entries;
}

}  // namespace wordladders
