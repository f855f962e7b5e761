#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "wordladders/lexicon.hpp"

namespace wordladders {

// Difficulty partition of the unblocked word pool of one language.
// levels[0] is level 1 (easiest).
struct LevelTable {
  Language language = Language::EN;
  std::vector<std::vector<std::string>> levels;
  std::unordered_map<std::string, int> assignment;  // lemma -> 1-based level

  int level_count() const noexcept { return static_cast<int>(levels.size()); }
  const std::vector<std::string>& words(int level) const;
};

// Easier entries compare less: nouns, then verbs, then adjectives; within a
// part of speech higher concreteness, then frequency, then familiarity.
// Ties fall back to the lemma so the order is total.
bool easier_than(const LexicalEntry& a, const LexicalEntry& b);

// Sorts the unblocked entries by `easier_than` and cuts them into
// `n_levels` contiguous groups whose sizes differ by at most one.
LevelTable build_levels(const std::vector<LexicalEntry>& entries, int n_levels = 50);

void write_level_table(std::ostream& out, const LevelTable& table);

struct PlayerProgress {
  std::string user;
  Language language = Language::EN;
  int level = 1;
  std::set<std::string> words_played_in_level;
  std::vector<double> scores_in_level;

  friend bool operator==(const PlayerProgress&, const PlayerProgress&) = default;
};

nlohmann::json to_json(const PlayerProgress& progress);
PlayerProgress progress_from_json(const nlohmann::json& doc);

// Uniform draw among the current level's words not yet played in this pass.
// Throws AdvancementDueError once `words_per_level` words (or the whole
// level, if smaller) have been drawn.
std::string draw_prompt(const LevelTable& table, const PlayerProgress& progress,
                        std::uint64_t rng_seed, int words_per_level = 10);

struct AdvanceOutcome {
  bool advanced = false;
  PlayerProgress progress;
};

// Needs `required_scores` scores for the level. The per-level state is
// cleared in every outcome; the level moves up only if the mean reaches
// `threshold` and the player is below `max_level`.
AdvanceOutcome check_advance(const PlayerProgress& progress, double threshold = 50.0,
                             int max_level = 50, std::size_t required_scores = 10);

}  // namespace wordladders
