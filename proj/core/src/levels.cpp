#include "wordladders/levels.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <random>
#include <tuple>
#include <unordered_set>

#include "wordladders/error.hpp"

namespace wordladders {

const std::vector<std::string>& LevelTable::words(int level) const {
  if (level < 1 || level > level_count()) {
    throw ValidationError("level " + std::to_string(level) + " out of range");
  }
  return levels[static_cast<std::size_t>(level - 1)];
}

bool easier_than(const LexicalEntry& a, const LexicalEntry& b) {
  const auto key = [](const LexicalEntry& e) {
    return std::make_tuple(static_cast<int>(e.pos), -e.concreteness, -e.frequency,
                           -e.familiarity, std::cref(e.lemma));
  };
  return key(a) < key(b);
}

LevelTable build_levels(const std::vector<LexicalEntry>& entries, int n_levels) {
  if (n_levels < 1) throw ValidationError("need at least one level");
  std::vector<const LexicalEntry*> pool;
  for (const auto& e : entries) {
    if (!e.blocked) pool.push_back(&e);
  }
  std::sort(pool.begin(), pool.end(),
            [](const LexicalEntry* a, const LexicalEntry* b) { return easier_than(*a, *b); });
  // A lemma listed under two parts of speech keeps its easier slot.
  std::unordered_set<std::string_view> seen;
  std::erase_if(pool, [&](const LexicalEntry* e) { return !seen.insert(e->lemma).second; });
  if (pool.size() < static_cast<std::size_t>(n_levels)) {
    throw ValidationError("only " + std::to_string(pool.size()) + " playable words for " +
                          std::to_string(n_levels) + " levels");
  }

  LevelTable table;
  table.language = pool.front()->language;
  table.levels.resize(static_cast<std::size_t>(n_levels));
  const std::size_t base = pool.size() / static_cast<std::size_t>(n_levels);
  const std::size_t extra = pool.size() % static_cast<std::size_t>(n_levels);
  std::size_t next = 0;
  for (std::size_t level = 0; level < table.levels.size(); ++level) {
    const std::size_t size = base + (level < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i, ++next) {
      table.levels[level].push_back(pool[next]->lemma);
      table.assignment.emplace(pool[next]->lemma, static_cast<int>(level) + 1);
    }
  }
  return table;
}

void write_level_table(std::ostream& out, const LevelTable& table) {
  for (int level = 1; level <= table.level_count(); ++level) {
    for (const auto& lemma : table.words(level)) out << lemma << '\t' << level << '\n';
  }
}

nlohmann::json to_json(const PlayerProgress& p) {
  return {{"user", p.user},
          {"language", to_string(p.language)},
          {"level", p.level},
          {"words_played_in_level", p.words_played_in_level},
          {"scores_in_level", p.scores_in_level}};
}

PlayerProgress progress_from_json(const nlohmann::json& doc) {
  PlayerProgress p;
  p.user = doc.at("user").get<std::string>();
  const auto lang = parse_language(doc.at("language").get<std::string>());
  if (!lang) throw ValidationError("unknown language in progress record");
  p.language = *lang;
  p.level = doc.at("level").get<int>();
  p.words_played_in_level = doc.at("words_played_in_level").get<std::set<std::string>>();
  p.scores_in_level = doc.at("scores_in_level").get<std::vector<double>>();
  return p;
}

std::string draw_prompt(const LevelTable& table, const PlayerProgress& progress,
                        std::uint64_t rng_seed, int words_per_level) {
  const auto& words = table.words(progress.level);
  const std::size_t quota = std::min(words.size(), static_cast<std::size_t>(words_per_level));
  if (progress.words_played_in_level.size() >= quota) throw AdvancementDueError();

  std::vector<const std::string*> candidates;
  for (const auto& w : words) {
    if (!progress.words_played_in_level.count(w)) candidates.push_back(&w);
  }
  if (candidates.empty()) throw AdvancementDueError();
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  return *candidates[pick(rng)];
}

AdvanceOutcome check_advance(const PlayerProgress& progress, double threshold, int max_level,
                             std::size_t required_scores) {
  if (progress.scores_in_level.size() < required_scores || progress.scores_in_level.empty()) {
    throw ValidationError("advancement needs " + std::to_string(required_scores) +
                          " scores, have " + std::to_string(progress.scores_in_level.size()));
  }
  const double mean =
      std::accumulate(progress.scores_in_level.begin(), progress.scores_in_level.end(), 0.0) /
      static_cast<double>(progress.scores_in_level.size());

  AdvanceOutcome out{false, progress};
  out.progress.words_played_in_level.clear();
  out.progress.scores_in_level.clear();
  if (mean >= threshold && progress.level < max_level) {
    out.advanced = true;
    ++out.progress.level;
  }
  return out;
}

}  // namespace wordladders
