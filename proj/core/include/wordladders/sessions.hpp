#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "wordladders/cleaning.hpp"
#include "wordladders/config.hpp"
#include "wordladders/graph_store.hpp"
#include "wordladders/levels.hpp"
#include "wordladders/scoring.hpp"
#include "wordladders/store.hpp"

namespace wordladders {

enum class Education { primary, middle, high_school, bachelor, master, doctorate, other };
enum class ReadingHabits { never, monthly, weekly, daily };

std::string_view to_string(Education value);
std::string_view to_string(ReadingHabits value);
std::optional<Education> parse_education(std::string_view text);
std::optional<ReadingHabits> parse_reading_habits(std::string_view text);

// Professions outside this list are kept verbatim (lowercased).
const std::vector<std::string_view>& canonical_professions();

// Anonymized player profile. There is deliberately no field for contact or
// location data; documents carrying any key outside `profile_fields()` are
// rejected.
struct UserProfile {
  std::string nickname;
  int age = 0;
  Education education = Education::other;
  std::string profession;
  std::string mother_tongue;
  ReadingHabits reading_habits = ReadingHabits::never;
  Language language_pref = Language::EN;

  friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

const std::vector<std::string>& profile_fields();
nlohmann::json to_json(const UserProfile& profile);
UserProfile profile_from_json(const nlohmann::json& doc);

// Ten-year bins: "0-9", "10-19", ...
std::string age_band(int age);

enum class MatchState { open, submitted, expired, scored };

std::string_view to_string(MatchState state);
std::optional<MatchState> parse_match_state(std::string_view text);

struct Match {
  std::string match_id;
  GameMode mode = GameMode::individual;
  std::vector<std::string> participants;
  std::string prompt;
  Language language = Language::EN;
  std::int64_t started_at_ms = 0;
  double duration_s = 120.0;
  MatchState state = MatchState::open;
  std::map<std::string, MatchResult> results;  // by nickname

  // Challenge: the higher score, empty on a tie or while incomplete.
  std::optional<std::string> winner() const;
  // Team: mean of the submitted member scores.
  std::optional<double> team_score() const;
};

nlohmann::json to_json(const Match& match);
Match match_from_json(const nlohmann::json& doc);

struct LeaderboardEntry {
  std::string nickname;
  double score = 0.0;
  std::uint64_t games = 0;
};

struct LeaderboardQuery {
  // Keys: age_band, education, profession, mother_tongue, reading_habits.
  std::map<std::string, std::string> facets;
  std::optional<Language> language;
  std::size_t limit = 0;  // 0 = unlimited
};

const std::vector<std::string>& leaderboard_facets();

// Per-language resources the service plays with.
struct LanguageResources {
  std::shared_ptr<const KnowledgeBase> kb;
  LevelTable levels;
  Vocabulary vocabulary;
  std::unordered_set<std::string> blocklist;
};

// Prompt pool = unblocked norms entries the KB knows, cut into `n_levels`
// levels. The cleaning vocabulary takes every norms lemma plus every KB
// lemma. Throws ValidationError if the pool is smaller than `n_levels`.
LanguageResources make_language_resources(const std::vector<LexicalEntry>& norms,
                                          KnowledgeBase kb,
                                          std::unordered_set<std::string> blocklist,
                                          int n_levels);

// Users, matches, level progression and leaderboards. All public members are
// safe to call concurrently. The server clock decides lateness.
class SessionManager {
 public:
  using Clock = std::function<std::int64_t()>;  // milliseconds since epoch

  SessionManager(EngineConfig config, std::shared_ptr<DocumentStore> store,
                 Clock clock = {});

  void add_language(Language lang, LanguageResources resources);
  bool serves(Language lang) const;
  const LanguageResources& resources(Language lang) const;

  // Rebuilds in-memory state from the store's collections and graphs.
  void restore();

  std::string register_user(const UserProfile& profile);
  std::optional<UserProfile> find_user(const std::string& nickname) const;

  // The prompt is drawn from the level of the first participant.
  Match start_match(const std::vector<std::string>& participants, GameMode mode,
                    Language lang, std::optional<std::uint64_t> seed = std::nullopt);

  MatchResult submit_ladder(const std::string& match_id, const std::string& nickname,
                            Ladder ladder);

  Match match(const std::string& match_id) const;

  std::vector<LeaderboardEntry> leaderboard(const LeaderboardQuery& query) const;

  PlayerProgress progress(const std::string& nickname, Language lang) const;

  std::vector<UserProfile> users() const;
  std::vector<Match> matches() const;
  std::vector<nlohmann::json> ladder_records() const;

  GraphStore& graphs() noexcept { return graphs_; }
  const GraphStore& graphs() const noexcept { return graphs_; }
  const EngineConfig& config() const noexcept { return config_; }
  std::int64_t now_ms() const { return clock_(); }

 private:
  struct MatchSlot {
    std::mutex mutex;
    Match match;
  };
  struct Tally {
    double score = 0.0;
    std::uint64_t games = 0;
  };

  std::shared_ptr<MatchSlot> find_slot(const std::string& match_id) const;
  void refresh_expiry(Match& match) const;
  void persist_match(const Match& match);
  std::size_t level_quota(const PlayerProgress& progress) const;
  PlayerProgress& progress_slot(const std::string& nickname, Language lang);

  EngineConfig config_;
  std::shared_ptr<DocumentStore> store_;
  Clock clock_;
  GraphStore graphs_;

  mutable std::shared_mutex state_mutex_;
  std::map<Language, LanguageResources> languages_;
  std::map<std::string, UserProfile> users_;
  std::map<std::string, std::shared_ptr<MatchSlot>> matches_;
  std::vector<nlohmann::json> ladders_;
  std::map<std::pair<std::string, Language>, PlayerProgress> progress_;
  std::map<std::pair<std::string, Language>, Tally> tallies_;
  std::uint64_t next_match_ = 1;
  std::uint64_t next_ladder_ = 1;
};

}  // namespace wordladders
