#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wordladders/config.hpp"
#include "wordladders/ladder_graph.hpp"
#include "wordladders/lexicon.hpp"

namespace wordladders {

// Accepted lemmas bucketed by code-point length for edit-distance lookup.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(const std::vector<LexicalEntry>& entries);

  void add(std::string_view lemma);
  void add_all(const KnowledgeBase& kb);
  bool contains(const std::string& lemma) const { return words_.count(lemma) > 0; }
  std::size_t size() const noexcept { return words_.size(); }

  // Every vocabulary word at Levenshtein distance exactly 1 from `word`.
  std::vector<std::string> neighbours(std::string_view word) const;

 private:
  std::unordered_set<std::string> words_;
  std::unordered_map<std::size_t, std::vector<std::pair<std::u32string, std::string>>> by_length_;
};

// True iff the code-point sequences differ by one insertion, deletion or
// substitution.
bool within_one_edit(std::u32string_view a, std::u32string_view b);

struct Correction {
  std::string original;
  std::string corrected;
};

struct TypoCorrection {
  Ladder ladder;
  std::vector<Correction> corrections;
};

TypoCorrection correct_typos(const Ladder& ladder, const Vocabulary& vocabulary);

enum class RemovalReason { nonword, blocked };

std::string_view to_string(RemovalReason reason);

struct Removal {
  std::string lemma;
  RemovalReason reason = RemovalReason::nonword;
};

struct StripResult {
  Ladder ladder;
  std::vector<Removal> removed;
  std::vector<std::string> truncated;  // valid rungs lost past a removal
};

StripResult strip_invalid(const Ladder& ladder, const Vocabulary& vocabulary,
                          const std::unordered_set<std::string>& blocklist);

struct BadLadderVerdict {
  bool bad = false;
  double kb_valid_fraction = 1.0;
};

// Fraction of consecutive steps that are KB generalizations or crowd-valid
// graph arcs; `graph` may be null when no play data is available.
BadLadderVerdict flag_bad_ladder(const Ladder& ladder, const KnowledgeBase& kb,
                                 const PlayGraph* graph, double tau = 0.5,
                                 const EngineConfig& config = {});

struct CleaningReport {
  std::string ladder_id;
  Ladder cleaned;
  std::vector<Correction> corrections;
  std::vector<Removal> removed;
  std::vector<std::string> truncated;
  bool bad_ladder = false;
  double kb_valid_fraction = 1.0;
};

nlohmann::json to_json(const CleaningReport& report);

// correct_typos -> strip_invalid -> flag_bad_ladder.
CleaningReport clean_ladder(std::string ladder_id, const Ladder& ladder,
                            const Vocabulary& vocabulary,
                            const std::unordered_set<std::string>& blocklist,
                            const KnowledgeBase& kb, const PlayGraph* graph,
                            const EngineConfig& config = {});

}  // namespace wordladders
