#include "wordladders/sessions.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <set>

#include "wordladders/error.hpp"

namespace wordladders {

using nlohmann::json;

namespace {

constexpr std::string_view kEducation[] = {"primary", "middle",    "high_school", "bachelor",
                                           "master",  "doctorate", "other"};
constexpr std::string_view kReading[] = {"never", "monthly", "weekly", "daily"};

std::string make_id(char prefix, std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c-%06llu", prefix, static_cast<unsigned long long>(n));
  return buf;
}

std::uint64_t id_number(const std::string& id) {
  if (id.size() < 3) return 0;
  try {
    return std::stoull(id.substr(2));
  } catch (const std::exception&) {
    return 0;
  }
}

std::int64_t system_now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

template <typename T>
T required(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string_view to_string(Education value) { return kEducation[static_cast<int>(value)]; }
std::string_view to_string(ReadingHabits value) { return kReading[static_cast<int>(value)]; }

std::optional<Education> parse_education(std::string_view text) {
  for (std::size_t i = 0; i < std::size(kEducation); ++i) {
    if (kEducation[i] == text) return static_cast<Education>(i);
  }
  return std::nullopt;
}

std::optional<ReadingHabits> parse_reading_habits(std::string_view text) {
  for (std::size_t i = 0; i < std::size(kReading); ++i) {
    if (kReading[i] == text) return static_cast<ReadingHabits>(i);
  }
  return std::nullopt;
}

const std::vector<std::string_view>& canonical_professions() {
  static const std::vector<std::string_view> kList = {
      "student", "teacher",    "researcher", "employee", "self_employed",
      "manager", "healthcare", "retired",    "unemployed", "other"};
  return kList;
}

const std::vector<std::string>& profile_fields() {
  static const std::vector<std::string> kFields = {
      "nickname",       "age",           "education",    "profession",
      "mother_tongue", "reading_habits", "language_pref"};
  return kFields;
}

json to_json(const UserProfile& p) {
  return {{"nickname", p.nickname},
          {"age", p.age},
          {"education", to_string(p.education)},
          {"profession", p.profession},
          {"mother_tongue", p.mother_tongue},
          {"reading_habits", to_string(p.reading_habits)},
          {"language_pref", to_string(p.language_pref)}};
}

namespace {

void validate_profile(UserProfile& p) {
  p.nickname = trim(p.nickname);
  if (p.nickname.empty() || p.nickname.size() > 40) {
    throw ValidationError("nickname must be 1-40 characters");
  }
  if (p.age < 0 || p.age > 130) throw ValidationError("age out of range");
  p.profession = normalize_lemma(p.profession);
  if (p.profession.empty()) throw ValidationError("profession is required");
  p.mother_tongue = normalize_lemma(p.mother_tongue);
  if (p.mother_tongue.empty()) throw ValidationError("mother tongue is required");
}

}  // namespace

UserProfile profile_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("profile must be a JSON object");
  const auto& allowed = profile_fields();
  for (const auto& [key, value] : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("field '" + key + "' is not part of the profile schema");
    }
  }
  UserProfile p;
  p.nickname = required<std::string>(doc, "nickname");
  p.age = required<int>(doc, "age");
  const auto edu = parse_education(required<std::string>(doc, "education"));
  if (!edu) throw ValidationError("unknown education level");
  p.education = *edu;
  p.profession = required<std::string>(doc, "profession");
  p.mother_tongue = required<std::string>(doc, "mother_tongue");
  const auto reading = parse_reading_habits(required<std::string>(doc, "reading_habits"));
  if (!reading) throw ValidationError("unknown reading habits value");
  p.reading_habits = *reading;
  const auto lang = parse_language(required<std::string>(doc, "language_pref"));
  if (!lang) throw ValidationError("unknown language preference");
  p.language_pref = *lang;
  validate_profile(p);
  return p;
}

std::string age_band(int age) {
  const int lo = (std::max(age, 0) / 10) * 10;
  return std::to_string(lo) + "-" + std::to_string(lo + 9);
}

std::string_view to_string(MatchState state) {
  switch (state) {
    case MatchState::open: return "open";
    case MatchState::submitted: return "submitted";
    case MatchState::expired: return "expired";
    case MatchState::scored: return "scored";
  }
  return "open";
}

std::optional<MatchState> parse_match_state(std::string_view text) {
  for (auto s : {MatchState::open, MatchState::submitted, MatchState::expired, MatchState::scored}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::optional<std::string> Match::winner() const {
  if (mode != GameMode::challenge || results.size() != participants.size()) return std::nullopt;
  const auto& a = results.at(participants[0]);
  const auto& b = results.at(participants[1]);
  if (a.score == b.score) return std::nullopt;
  return a.score > b.score ? participants[0] : participants[1];
}

std::optional<double> Match::team_score() const {
  if (mode != GameMode::team || results.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& [nick, r] : results) sum += r.score;
  return sum / static_cast<double>(results.size());
}

json to_json(const Match& m) {
  json results = json::object();
  for (const auto& [nick, r] : m.results) results[nick] = to_json(r);
  json doc = {{"match_id", m.match_id},
              {"mode", to_string(m.mode)},
              {"participants", m.participants},
              {"prompt", m.prompt},
              {"language", to_string(m.language)},
              {"started_at", m.started_at_ms},
              {"duration", m.duration_s},
              {"state", to_string(m.state)},
              {"results", std::move(results)}};
  if (auto w = m.winner()) doc["winner"] = *w;
  if (auto t = m.team_score()) doc["team_score"] = *t;
  return doc;
}

Match match_from_json(const json& doc) {
  Match m;
  m.match_id = doc.at("match_id").get<std::string>();
  m.mode = parse_game_mode(doc.at("mode").get<std::string>()).value();
  m.participants = doc.at("participants").get<std::vector<std::string>>();
  m.prompt = doc.at("prompt").get<std::string>();
  m.language = parse_language(doc.at("language").get<std::string>()).value();
  m.started_at_ms = doc.at("started_at").get<std::int64_t>();
  m.duration_s = doc.at("duration").get<double>();
  m.state = parse_match_state(doc.at("state").get<std::string>()).value();
  for (const auto& [nick, r] : doc.at("results").items()) m.results[nick] = match_result_from_json(r);
  return m;
}

const std::vector<std::string>& leaderboard_facets() {
  static const std::vector<std::string> kFacets = {"age_band", "education", "profession",
                                                   "mother_tongue", "reading_habits"};
  return kFacets;
}

// --- SessionManager ---------------------------------------------------------

SessionManager::SessionManager(EngineConfig config, std::shared_ptr<DocumentStore> store,
                               Clock clock)
    : config_(config),
      store_(store ? std::move(store) : std::make_shared<MemoryStore>()),
      clock_(clock ? std::move(clock) : Clock(system_now_ms)),
      graphs_(config.depth_cap) {
  graphs_.on_update([store = store_](const PlayGraph& g) {
    store->put_graph(g.language(), g.root(), serialize_graph(g));
  });
}

void SessionManager::add_language(Language lang, LanguageResources resources) {
  if (!resources.kb) resources.kb = std::make_shared<KnowledgeBase>(lang, std::vector<TaxonomyEdge>{});
  graphs_.set_knowledge_base(lang, resources.kb);
  std::unique_lock lock(state_mutex_);
  languages_[lang] = std::move(resources);
}

bool SessionManager::serves(Language lang) const {
  std::shared_lock lock(state_mutex_);
  return languages_.count(lang) > 0;
}

const LanguageResources& SessionManager::resources(Language lang) const {
  std::shared_lock lock(state_mutex_);
  const auto it = languages_.find(lang);
  if (it == languages_.end()) {
    throw ValidationError("language " + std::string(to_string(lang)) + " is not served");
  }
  return it->second;
}

void SessionManager::restore() {
  std::unique_lock lock(state_mutex_);
  for (const auto& doc : store_->load("users")) {
    const UserProfile p = profile_from_json(doc);
    users_[p.nickname] = p;
  }
  for (const auto& doc : store_->load("matches")) {
    Match m = match_from_json(doc);
    next_match_ = std::max(next_match_, id_number(m.match_id) + 1);
    auto slot = std::make_shared<MatchSlot>();
    slot->match = std::move(m);
    matches_[slot->match.match_id] = std::move(slot);
  }
  for (auto& doc : store_->load("ladders")) {
    next_ladder_ = std::max(next_ladder_, id_number(doc.at("ladder_id").get<std::string>()) + 1);
    const auto lang = parse_language(doc.at("language").get<std::string>()).value();
    auto& tally = tallies_[{doc.at("nickname").get<std::string>(), lang}];
    tally.score += doc.at("score").get<double>();
    ++tally.games;
    ladders_.push_back(std::move(doc));
  }
  for (const auto& doc : store_->load("progress")) {
    PlayerProgress p = progress_from_json(doc);
    progress_[{p.user, p.language}] = std::move(p);
  }
  for (const auto& doc : store_->load_graphs()) graphs_.restore(deserialize_graph(doc));
}

LanguageResources make_language_resources(const std::vector<LexicalEntry>& norms,
                                          KnowledgeBase kb,
                                          std::unordered_set<std::string> blocklist,
                                          int n_levels) {
  LanguageResources r;
  auto pool = retain_known(apply_blocklist(norms, blocklist), kb);
  r.levels = build_levels(pool, n_levels);
  r.levels.language = kb.language();
  r.vocabulary = Vocabulary(norms);
  r.vocabulary.add_all(kb);
  r.kb = std::make_shared<const KnowledgeBase>(std::move(kb));
  r.blocklist = std::move(blocklist);
  return r;
}

std::string SessionManager::register_user(const UserProfile& profile) {
  UserProfile p = profile;
  validate_profile(p);
  std::unique_lock lock(state_mutex_);
  if (users_.count(p.nickname)) throw ConflictError("nickname '" + p.nickname + "' is taken");
  store_->append("users", to_json(p));
  users_[p.nickname] = p;
  return p.nickname;
}

std::optional<UserProfile> SessionManager::find_user(const std::string& nickname) const {
  std::shared_lock lock(state_mutex_);
  const auto it = users_.find(nickname);
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

std::size_t SessionManager::level_quota(const PlayerProgress& progress) const {
  const auto& table = languages_.at(progress.language).levels;
  const auto& words = table.words(progress.level);
  return std::min(words.size(), static_cast<std::size_t>(config_.words_per_level));
}

PlayerProgress& SessionManager::progress_slot(const std::string& nickname, Language lang) {
  auto [it, inserted] = progress_.try_emplace({nickname, lang});
  if (inserted) {
    it->second.user = nickname;
    it->second.language = lang;
  }
  return it->second;
}

Match SessionManager::start_match(const std::vector<std::string>& participants, GameMode mode,
                                  Language lang, std::optional<std::uint64_t> seed) {
  switch (mode) {
    case GameMode::individual:
      if (participants.size() != 1) throw ValidationError("individual matches take one player");
      break;
    case GameMode::challenge:
      if (participants.size() != 2) throw ValidationError("challenge matches take exactly two players");
      break;
    case GameMode::team:
      if (participants.size() < 2) throw ValidationError("team matches take at least two players");
      break;
  }
  if (std::set<std::string>(participants.begin(), participants.end()).size() != participants.size()) {
    throw ValidationError("a player cannot join the same match twice");
  }

  std::unique_lock lock(state_mutex_);
  if (!languages_.count(lang)) {
    throw ValidationError("language " + std::string(to_string(lang)) + " is not served");
  }
  for (const auto& nick : participants) {
    if (!users_.count(nick)) throw NotFoundError("unknown player '" + nick + "'");
  }
  const auto& table = languages_.at(lang).levels;
  if (table.level_count() == 0) throw ValidationError("no levels built for this language");

  PlayerProgress& progress = progress_slot(participants.front(), lang);
  const std::size_t quota = level_quota(progress);
  if (progress.words_played_in_level.size() >= quota) {
    // Matches left unfinished in this pass count as zero.
    while (progress.scores_in_level.size() < quota) progress.scores_in_level.push_back(0.0);
    progress = check_advance(progress, config_.advance_threshold, table.level_count(), quota).progress;
  }
  const std::uint64_t draw_seed = seed ? *seed : std::random_device{}();
  const std::string prompt =
      draw_prompt(table, progress, draw_seed, config_.words_per_level);
  progress.words_played_in_level.insert(prompt);
  store_->append("progress", to_json(progress));

  auto slot = std::make_shared<MatchSlot>();
  Match& m = slot->match;
  m.match_id = make_id('m', next_match_++);
  m.mode = mode;
  m.participants = participants;
  m.prompt = prompt;
  m.language = lang;
  m.started_at_ms = clock_();
  m.duration_s = config_.match_duration_s;
  m.state = MatchState::open;
  matches_[m.match_id] = slot;
  store_->append("matches", to_json(m));
  return m;
}

std::shared_ptr<SessionManager::MatchSlot> SessionManager::find_slot(const std::string& match_id) const {
  std::shared_lock lock(state_mutex_);
  const auto it = matches_.find(match_id);
  if (it == matches_.end()) throw NotFoundError("unknown match '" + match_id + "'");
  return it->second;
}

void SessionManager::refresh_expiry(Match& match) const {
  if (match.state != MatchState::open && match.state != MatchState::submitted) return;
  const double elapsed = static_cast<double>(clock_() - match.started_at_ms) / 1000.0;
  if (elapsed > match.duration_s) match.state = MatchState::expired;
}

void SessionManager::persist_match(const Match& match) { store_->append("matches", to_json(match)); }

MatchResult SessionManager::submit_ladder(const std::string& match_id, const std::string& nickname,
                                          Ladder ladder) {
  auto slot = find_slot(match_id);
  std::lock_guard match_lock(slot->mutex);
  Match& match = slot->match;

  if (std::find(match.participants.begin(), match.participants.end(), nickname) ==
      match.participants.end()) {
    throw ForbiddenError("'" + nickname + "' is not a participant of " + match_id);
  }
  if (match.results.count(nickname)) throw ConflictError("ladder already submitted");

  const double elapsed = static_cast<double>(clock_() - match.started_at_ms) / 1000.0;
  if (match.state == MatchState::expired || elapsed > match.duration_s) {
    if (match.state != MatchState::expired) {
      match.state = MatchState::expired;
      persist_match(match);
    }
    throw ExpiredError("match " + match_id + " closed after " +
                       std::to_string(static_cast<int>(match.duration_s)) + " s");
  }
  if (match.state == MatchState::scored) throw ConflictError("match already scored");

  if (ladder.prompt.empty()) ladder.prompt = match.prompt;
  ladder.language = match.language;
  ladder.mode = match.mode;
  ladder.duration_used = std::max(0.0, elapsed);
  normalize_and_validate(ladder);
  if (ladder.prompt != match.prompt) {
    throw ValidationError("ladder prompt '" + ladder.prompt + "' is not the match prompt");
  }

  const auto kb = resources(match.language).kb;
  const MatchResult result = graphs_.update(match.language, match.prompt, [&](PlayGraph& g) {
    const std::uint64_t prior = g.total_plays();
    record_play(g, ladder, kb.get(), config_.validity);
    MatchResult r = evaluate_ladder(ladder, g, *kb, prior, ladder.duration_used, config_);
    g.observe_length(r.ulv);
    return r;
  });

  match.results[nickname] = result;
  match.state = match.results.size() == match.participants.size() ? MatchState::scored
                                                                  : MatchState::submitted;
  persist_match(match);

  json record = {{"match_id", match.match_id},
                 {"nickname", nickname},
                 {"mode", to_string(match.mode)},
                 {"language", to_string(match.language)},
                 {"prompt", ladder.prompt},
                 {"ascent", ladder.ascent},
                 {"descent", ladder.descent},
                 {"elapsed", result.elapsed},
                 {"submitted_at", clock_()},
                 {"ul", result.ul},
                 {"ulv", result.ulv},
                 {"np", result.np},
                 {"npl", result.npl},
                 {"m", result.m},
                 {"score", result.score},
                 {"display_score", result.display_score()},
                 {"stars", result.stars},
                 {"ascent_valid", result.ascent_valid},
                 {"descent_valid", result.descent_valid}};

  std::unique_lock lock(state_mutex_);
  record["ladder_id"] = make_id('l', next_ladder_++);
  store_->append("ladders", record);
  ladders_.push_back(std::move(record));
  auto& tally = tallies_[{nickname, match.language}];
  tally.score += result.score;
  ++tally.games;

  const auto it = progress_.find({nickname, match.language});
  if (it != progress_.end()) {
    PlayerProgress& progress = it->second;
    if (progress.words_played_in_level.count(match.prompt) &&
        progress.scores_in_level.size() < progress.words_played_in_level.size()) {
      progress.scores_in_level.push_back(result.score);
      const std::size_t quota = level_quota(progress);
      if (progress.scores_in_level.size() >= quota) {
        const int max_level = languages_.at(match.language).levels.level_count();
        progress = check_advance(progress, config_.advance_threshold, max_level, quota).progress;
      }
      store_->append("progress", to_json(progress));
    }
  }
  return result;
}

Match SessionManager::match(const std::string& match_id) const {
  auto slot = find_slot(match_id);
  std::lock_guard lock(slot->mutex);
  Match copy = slot->match;
  refresh_expiry(copy);
  return copy;
}

std::vector<LeaderboardEntry> SessionManager::leaderboard(const LeaderboardQuery& query) const {
  const auto& facets = leaderboard_facets();
  for (const auto& [key, value] : query.facets) {
    if (std::find(facets.begin(), facets.end(), key) == facets.end()) {
      throw ValidationError("unknown leaderboard facet '" + key + "'");
    }
  }

  std::shared_lock lock(state_mutex_);
  std::vector<LeaderboardEntry> out;
  for (const auto& [nick, p] : users_) {
    bool keep = true;
    for (const auto& [key, raw] : query.facets) {
      const std::string value = normalize_lemma(raw);
      if (key == "age_band") keep = keep && age_band(p.age) == value;
      else if (key == "education") keep = keep && to_string(p.education) == value;
      else if (key == "profession") keep = keep && p.profession == value;
      else if (key == "mother_tongue") keep = keep && p.mother_tongue == value;
      else if (key == "reading_habits") keep = keep && to_string(p.reading_habits) == value;
    }
    if (!keep) continue;
    LeaderboardEntry entry{nick, 0.0, 0};
    for (const auto& [key, tally] : tallies_) {
      if (key.first != nick || (query.language && key.second != *query.language)) continue;
      entry.score += tally.score;
      entry.games += tally.games;
    }
    out.push_back(std::move(entry));
  }
  std::sort(out.begin(), out.end(), [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.games != b.games) return a.games < b.games;
    return a.nickname < b.nickname;
  });
  if (query.limit && out.size() > query.limit) out.resize(query.limit);
  return out;
}

PlayerProgress SessionManager::progress(const std::string& nickname, Language lang) const {
  std::shared_lock lock(state_mutex_);
  const auto it = progress_.find({nickname, lang});
  if (it != progress_.end()) return it->second;
  PlayerProgress fresh;
  fresh.user = nickname;
  fresh.language = lang;
  return fresh;
}

std::vector<UserProfile> SessionManager::users() const {
  std::shared_lock lock(state_mutex_);
  std::vector<UserProfile> out;
  for (const auto& [nick, p] : users_) out.push_back(p);
  return out;
}

std::vector<Match> SessionManager::matches() const {
  std::vector<std::shared_ptr<MatchSlot>> slots;
  {
    std::shared_lock lock(state_mutex_);
    for (const auto& [id, slot] : matches_) slots.push_back(slot);
  }
  std::vector<Match> out;
  for (const auto& slot : slots) {
    std::lock_guard lock(slot->mutex);
    out.push_back(slot->match);
    refresh_expiry(out.back());
  }
  return out;
}

std::vector<json> SessionManager::ladder_records() const {
  std::shared_lock lock(state_mutex_);
  return ladders_;
}

}  // namespace wordladders
