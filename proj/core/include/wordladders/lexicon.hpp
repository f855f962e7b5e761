#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wordladders/config.hpp"
#include "wordladders/text.hpp"

namespace wordladders {

enum class PartOfSpeech { noun = 0, verb = 1, adjective = 2 };

std::string_view to_string(PartOfSpeech pos);
std::optional<PartOfSpeech> parse_pos(std::string_view text);

struct LexicalEntry {
  std::string lemma;
  Language language = Language::EN;
  PartOfSpeech pos = PartOfSpeech::noun;
  double concreteness = 1.0;  // [1,5]
  double frequency = 0.0;     // Zipf-like, >= 0
  double familiarity = 1.0;   // [1,7]
  bool blocked = false;

  friend bool operator==(const LexicalEntry&, const LexicalEntry&) = default;
};

// A row that was skipped rather than failing the whole load.
struct LoadWarning {
  std::size_t line = 0;
  std::string message;
};

struct NormsLoad {
  std::vector<LexicalEntry> entries;
  std::vector<LoadWarning> warnings;
};

// Norms TSV: header `lemma pos concreteness frequency familiarity`
// (tab-separated). Structural problems throw ParseError; out-of-range
// norms and duplicate keys are skipped with a warning.
NormsLoad parse_norms(std::istream& in, Language lang);
NormsLoad load_norms(const std::filesystem::path& path, Language lang);
void write_norms(std::ostream& out, const std::vector<LexicalEntry>& entries);

std::unordered_set<std::string> parse_blocklist(std::istream& in);
std::unordered_set<std::string> load_blocklist(const std::filesystem::path& path);

std::vector<LexicalEntry> apply_blocklist(std::vector<LexicalEntry> entries,
                                          const std::unordered_set<std::string>& blocklist);

struct TaxonomyEdge {
  std::string hyponym;
  std::string hypernym;
  Language language = Language::EN;

  friend bool operator==(const TaxonomyEdge&, const TaxonomyEdge&) = default;
};

// IS-A taxonomy for one language. Immutable once built; the constructor
// rejects cycles with CycleError, so every instance is a DAG.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  KnowledgeBase(Language lang, std::vector<TaxonomyEdge> edges);

  Language language() const noexcept { return language_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<TaxonomyEdge>& edges() const noexcept { return edges_; }
  bool contains(std::string_view lemma) const;

  // Direct neighbours; empty for unknown lemmas.
  const std::vector<std::string>& hypernyms_of(std::string_view lemma) const;
  const std::vector<std::string>& hyponyms_of(std::string_view lemma) const;

  bool has_edge(std::string_view hyponym, std::string_view hypernym) const;
  bool reaches(std::string_view specific, std::string_view generic) const;

  // Number of arcs on the longest chain above (below) `lemma`, capped.
  int longest_chain_up(std::string_view lemma, int cap) const;
  int longest_chain_down(std::string_view lemma, int cap) const;

 private:
  using Adjacency = std::unordered_map<std::string, std::vector<std::string>>;
  int longest_chain(const Adjacency& adj, std::string_view lemma, int cap) const;

  Language language_ = Language::EN;
  std::vector<TaxonomyEdge> edges_;
  Adjacency up_;
  Adjacency down_;
};

struct TaxonomyLoad {
  KnowledgeBase kb;
  std::vector<LoadWarning> warnings;
};

// Taxonomy TSV: `hyponym<TAB>hypernym` per line. Self-loops and exact
// duplicates are skipped with a warning; a cycle throws CycleError.
TaxonomyLoad parse_taxonomy(std::istream& in, Language lang);
TaxonomyLoad load_taxonomy(const std::filesystem::path& path, Language lang);

bool is_generalization(const KnowledgeBase& kb, std::string_view specific,
                       std::string_view generic,
                       ValidityMode mode = ValidityMode::transitive);

// Drops entries whose lemma the knowledge base does not know.
std::vector<LexicalEntry> retain_known(std::vector<LexicalEntry> entries,
                                       const KnowledgeBase& kb);

}  // namespace wordladders
