#include <algorithm>
#include <filesystem>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "world.hpp"
#include "wordladders/error.hpp"
#include "wordladders/export.hpp"

namespace wl = wordladders;
using fixtures::World;
using fixtures::profile;

namespace {

const std::set<std::string> kPii{"email", "e-mail", "mail", "phone", "phone_number", "telephone",
                                 "ip", "ip_address", "geolocation", "location", "latitude",
                                 "longitude", "lat", "lon", "address", "gps"};

// Collects every object key anywhere inside a document.
void collect_keys(const nlohmann::json& doc, std::set<std::string>& out) {
  if (doc.is_object()) {
    for (const auto& [k, v] : doc.items()) {
      out.insert(k);
      collect_keys(v, out);
    }
  } else if (doc.is_array()) {
    for (const auto& v : doc) collect_keys(v, out);
  }
}

wl::Ladder rungs(std::vector<std::string> up, std::vector<std::string> down = {}) {
  wl::Ladder l;
  l.prompt = "fox";
  l.ascent = std::move(up);
  l.descent = std::move(down);
  return l;
}

}  // namespace

TEST(Users, RegisterAndFind) {
  World w;
  EXPECT_EQ(w.sessions->register_user(profile("ada")), "ada");
  const auto found = w.sessions->find_user("ada");
  ASSERT_TRUE(found);
  EXPECT_EQ(found->education, wl::Education::bachelor);
  EXPECT_FALSE(w.sessions->find_user("bob"));
}

TEST(Users, DuplicateNicknameRejected) {
  World w;
  w.sessions->register_user(profile("ada"));
  EXPECT_THROW(w.sessions->register_user(profile("ada", wl::Education::master)), wl::ConflictError);
}

TEST(Users, InvalidEnumsAndFieldsRejected) {
  auto doc = wl::to_json(profile("ada"));
  EXPECT_EQ(wl::profile_from_json(doc), profile("ada"));
  auto bad_enum = doc;
  bad_enum["education"] = "wizardry";
  EXPECT_THROW(wl::profile_from_json(bad_enum), wl::ValidationError);
  auto with_email = doc;
  with_email["email"] = "ada@example.org";
  EXPECT_THROW(wl::profile_from_json(with_email), wl::ValidationError);
  auto negative = profile("ada");
  negative.age = -1;
  World w;
  EXPECT_THROW(w.sessions->register_user(negative), wl::ValidationError);
}

TEST(Users, AgeBands) {
  EXPECT_EQ(wl::age_band(0), "0-9");
  EXPECT_EQ(wl::age_band(27), "20-29");
  EXPECT_EQ(wl::age_band(30), "30-39");
}

TEST(Matches, IndividualStart) {
  World w;
  w.sessions->register_user(profile("ada"));
  const auto m = w.sessions->start_match({"ada"}, wl::GameMode::individual, wl::Language::EN, 1);
  EXPECT_EQ(m.state, wl::MatchState::open);
  EXPECT_DOUBLE_EQ(m.duration_s, 120.0);
  EXPECT_EQ(m.prompt, "fox");
  EXPECT_EQ(m.started_at_ms, w.now->load());
}

TEST(Matches, ArityAndRegistration) {
  World w;
  w.sessions->register_user(profile("ada"));
  w.sessions->register_user(profile("bob"));
  EXPECT_THROW(w.sessions->start_match({"ada"}, wl::GameMode::challenge, wl::Language::EN), wl::ValidationError);
  EXPECT_THROW(w.sessions->start_match({"ada", "bob"}, wl::GameMode::individual, wl::Language::EN),
               wl::ValidationError);
  EXPECT_THROW(w.sessions->start_match({"ada"}, wl::GameMode::team, wl::Language::EN), wl::ValidationError);
  EXPECT_THROW(w.sessions->start_match({"ada", "ada"}, wl::GameMode::challenge, wl::Language::EN),
               wl::ValidationError);
  EXPECT_THROW(w.sessions->start_match({"ada", "eve"}, wl::GameMode::challenge, wl::Language::EN),
               wl::NotFoundError);
  EXPECT_THROW(w.sessions->start_match({"ada"}, wl::GameMode::individual, wl::Language::IT),
               wl::ValidationError);
}

TEST(Matches, ChallengeSharesPromptAndPicksWinner) {
  World w;
  w.sessions->register_user(profile("ada"));
  w.sessions->register_user(profile("bob"));
  const auto m = w.sessions->start_match({"ada", "bob"}, wl::GameMode::challenge, wl::Language::EN, 3);
  w.advance(30);
  const auto a = w.sessions->submit_ladder(m.match_id, "ada", fixtures::good_fox_ladder());
  EXPECT_EQ(w.sessions->match(m.match_id).state, wl::MatchState::submitted);
  const auto b = w.sessions->submit_ladder(m.match_id, "bob", rungs({"canine"}));
  const auto done = w.sessions->match(m.match_id);
  EXPECT_EQ(done.state, wl::MatchState::scored);
  EXPECT_EQ(done.results.at("ada").score, a.score);
  EXPECT_EQ(done.results.at("bob").score, b.score);
  ASSERT_GT(a.score, b.score);
  EXPECT_EQ(done.winner(), "ada");
}

TEST(Matches, TeamScoreIsMean) {
  World w;
  for (auto n : {"ada", "bob", "cy"}) w.sessions->register_user(profile(n));
  const auto m = w.sessions->start_match({"ada", "bob", "cy"}, wl::GameMode::team, wl::Language::EN, 4);
  double sum = 0;
  sum += w.sessions->submit_ladder(m.match_id, "ada", fixtures::good_fox_ladder()).score;
  sum += w.sessions->submit_ladder(m.match_id, "bob", rungs({"canine", "mammal"})).score;
  sum += w.sessions->submit_ladder(m.match_id, "cy", rungs({})).score;
  const auto done = w.sessions->match(m.match_id);
  EXPECT_EQ(done.state, wl::MatchState::scored);
  ASSERT_TRUE(done.team_score());
  EXPECT_NEAR(*done.team_score(), sum / 3, 1e-9);
  EXPECT_FALSE(done.winner());
}

// Composes npl, the score formula and the bonus cap by hand for a fresh graph.
TEST(Submit, GoodFoxLadderFullPipeline) {
  for (const auto& edges : {fixtures::fox_edges(), fixtures::fox_edges_full()}) {
    World w(edges);
    w.sessions->register_user(profile("ada"));
    const auto m = w.sessions->start_match({"ada"}, wl::GameMode::individual, wl::Language::EN, 1);
    const int m_init = 1 + oracle::longest_path(edges, "fox", true) + oracle::longest_path(edges, "fox", false);
    ASSERT_EQ(w.sessions->graphs().snapshot(wl::Language::EN, "fox")->max_length(), m_init);
    w.advance(100);
    const auto r = w.sessions->submit_ladder(m.match_id, "ada", fixtures::good_fox_ladder());

    const double npl = 0.2;
    const int ul = 6;
    const int ulv = oracle::ulv_by_prefix_enumeration(fixtures::good_fox_ladder(), edges, {}, 50);
    const int mm = std::max(m_init, ulv);
    const double s = 100 * npl * std::min(ulv, mm) / mm + 100 * (1 - npl) * std::min(ul, mm) / mm;
    const double expected = std::min(s + 10 * (1 - 100.0 / 120), 100.0);

    EXPECT_EQ(r.np, 0u);
    EXPECT_DOUBLE_EQ(r.npl, npl);
    EXPECT_EQ(r.ul, ul);
    EXPECT_EQ(r.ulv, ulv);
    EXPECT_EQ(r.m, mm);
    EXPECT_NEAR(r.score, expected, 1e-9);
    EXPECT_NEAR(r.score, 100.0, 1e-9);
    EXPECT_EQ(r.stars, 5);
    EXPECT_EQ(w.sessions->match(m.match_id).state, wl::MatchState::scored);
    const auto g = w.sessions->graphs().snapshot(wl::Language::EN, "fox");
    EXPECT_EQ(g->total_plays(), 1u);
    EXPECT_EQ(g->find_arc(wl::Side::hypo, "fox", "grey fox")->play_count, 1u);
  }
}

TEST(Submit, LateSubmissionExpiresWithoutMutation) {
  World w;
  w.sessions->register_user(profile("ada"));
  const auto m = w.sessions->start_match({"ada"}, wl::GameMode::individual, wl::Language::EN, 1);
  const auto before = *w.sessions->graphs().snapshot(wl::Language::EN, "fox");
  w.advance(121);
  EXPECT_THROW(w.sessions->submit_ladder(m.match_id, "ada", fixtures::good_fox_ladder()), wl::ExpiredError);
  EXPECT_EQ(*w.sessions->graphs().snapshot(wl::Language::EN, "fox"), before);
  EXPECT_EQ(w.sessions->match(m.match_id).state, wl::MatchState::expired);
  EXPECT_TRUE(w.sessions->ladder_records().empty());
}

TEST(Submit, BoundaryIsInclusive) {
  World w;
  w.sessions->register_user(profile("ada"));
  const auto m = w.sessions->start_match({"ada"}, wl::GameMode::individual, wl::Language::EN, 1);
  w.advance(120);
  EXPECT_NO_THROW(w.sessions->submit_ladder(m.match_id, "ada", rungs({"canine"})));
}

TEST(Submit, PromptOnlyLadder) {
  World w;
  w.sessions->register_user(profile("ada"));
  const auto m = w.sessions->start_match({"ada"}, wl::GameMode::individual, wl::Language::EN, 1);
  w.advance(120);
  const auto r = w.sessions->submit_ladder(m.match_id, "ada", rungs({}));
  EXPECT_EQ(r.ul, 1);
  EXPECT_EQ(r.ulv, 1);
  EXPECT_EQ(r.m, 6);
  EXPECT_NEAR(r.score, 100.0 / 6, 1e-9);
  EXPECT_EQ(r.stars, 1);
  EXPECT_EQ(w.sessions->match(m.match_id).state, wl::MatchState::scored);
}

TEST(Submit, RejectionsLeaveMatchOpen) {
  World w;
  w.sessions->register_user(profile("ada"));
  w.sessions->register_user(profile("bob"));
  const auto m = w.sessions->start_match({"ada"}, wl::GameMode::individual, wl::Language::EN, 1);
  EXPECT_THROW(w.sessions->submit_ladder(m.match_id, "bob", rungs({"canine"})), wl::ForbiddenError);
  EXPECT_THROW(w.sessions->submit_ladder(m.match_id, "ada", rungs({"canine", "canine"})), wl::ValidationError);
  EXPECT_THROW(w.sessions->submit_ladder("m-999999", "ada", rungs({})), wl::NotFoundError);
  auto wrong = rungs({"canine"});
  wrong.prompt = "wolf";
  EXPECT_THROW(w.sessions->submit_ladder(m.match_id, "ada", wrong), wl::ValidationError);
  EXPECT_EQ(w.sessions->match(m.match_id).state, wl::MatchState::open);
  w.sessions->submit_ladder(m.match_id, "ada", rungs({"canine"}));
  EXPECT_THROW(w.sessions->submit_ladder(m.match_id, "ada", rungs({"canine"})), wl::ConflictError);
}

TEST(Submit, GrowsStoredMaxLength) {
  World w(fixtures::fox_edges());
  w.sessions->register_user(profile("ada"));
  // grey fox is only crowd-valid after 50 plays; m then grows to 6.
  for (int i = 0; i < 51; ++i) {
    const auto m = w.sessions->start_match({"ada"}, wl::GameMode::individual, wl::Language::EN, i);
    w.sessions->submit_ladder(m.match_id, "ada", fixtures::good_fox_ladder());
  }
  const auto g = w.sessions->graphs().snapshot(wl::Language::EN, "fox");
  EXPECT_EQ(g->find_arc(wl::Side::hypo, "fox", "grey fox")->play_count, 51u);
  EXPECT_EQ(g->max_length(), 6);
  EXPECT_EQ(g->total_plays(), 51u);
}

TEST(Leaderboard, GlobalAndFacets) {
  World w;
  w.sessions->register_user(profile("ada", wl::Education::master, 34));
  w.sessions->register_user(profile("bob", wl::Education::bachelor, 22));
  w.sessions->register_user(profile("cy", wl::Education::bachelor, 25));
  const auto m = w.sessions->start_match({"bob"}, wl::GameMode::individual, wl::Language::EN, 1);
  w.sessions->submit_ladder(m.match_id, "bob", fixtures::good_fox_ladder());

  const auto all = w.sessions->leaderboard({});
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].nickname, "bob");
  EXPECT_EQ(all[0].games, 1u);

  wl::LeaderboardQuery q;
  q.facets["education"] = "master";
  const auto masters = w.sessions->leaderboard(q);
  ASSERT_EQ(masters.size(), 1u);
  EXPECT_EQ(masters[0].nickname, "ada");

  q.facets = {{"age_band", "20-29"}, {"education", "bachelor"}};
  EXPECT_EQ(w.sessions->leaderboard(q).size(), 2u);
  q.facets = {{"education", "astrologer"}};
  EXPECT_TRUE(w.sessions->leaderboard(q).empty());
  q.facets = {{"shoe_size", "42"}};
  EXPECT_THROW(w.sessions->leaderboard(q), wl::ValidationError);

  wl::LeaderboardQuery limited;
  limited.limit = 2;
  EXPECT_EQ(w.sessions->leaderboard(limited).size(), 2u);
}

TEST(Leaderboard, TieBrokenByFewerGames) {
  auto store = std::make_shared<wl::MemoryStore>();
  int id = 1;
  auto add_ladder = [&](const std::string& nick, double score) {
    store->append("ladders", {{"ladder_id", "l-" + std::to_string(id++)}, {"nickname", nick},
                              {"language", "EN"}, {"score", score}});
  };
  for (const auto& n : {"ada", "bob", "cy"}) store->append("users", wl::to_json(profile(n)));
  for (int i = 0; i < 7; ++i) add_ladder("ada", 10.0);  // 70 over 7 games
  for (int i = 0; i < 5; ++i) add_ladder("bob", 14.0);  // 70 over 5 games
  add_ladder("cy", 70.0);                                // 70 over 1 game
  World w(fixtures::fox_edges_full(), store);
  w.sessions->restore();
  const auto board = w.sessions->leaderboard({});
  ASSERT_EQ(board.size(), 3u);
  EXPECT_EQ(board[0].nickname, "cy");
  EXPECT_EQ(board[1].nickname, "bob");
  EXPECT_EQ(board[1].games, 5u);
  EXPECT_EQ(board[2].nickname, "ada");
}

namespace {

World world_with_levels(std::vector<std::vector<std::string>> levels) {
  World w;
  auto r = World::resources(fixtures::fox_edges_full());
  r.levels.levels = std::move(levels);
  r.levels.assignment.clear();
  for (std::size_t l = 0; l < r.levels.levels.size(); ++l) {
    for (const auto& word : r.levels.levels[l]) r.levels.assignment[word] = static_cast<int>(l) + 1;
  }
  w.sessions = std::make_unique<wl::SessionManager>(wl::EngineConfig{}, w.store,
                                                    [clock = w.now] { return clock->load(); });
  w.sessions->add_language(wl::Language::EN, r);
  w.sessions->register_user(profile("ada"));
  return w;
}

// Plays one prompt-only match per level word at the end of the window.
std::set<std::string> play_level_pass(World& w, std::uint64_t seed) {
  std::set<std::string> seen;
  for (std::uint64_t i = 0; i < 3; ++i) {
    const auto m = w.sessions->start_match({"ada"}, wl::GameMode::individual, wl::Language::EN, seed + i);
    EXPECT_TRUE(seen.insert(m.prompt).second) << "repeated " << m.prompt;
    w.advance(120);
    wl::Ladder l;
    l.prompt = m.prompt;
    w.sessions->submit_ladder(m.match_id, "ada", l);
  }
  return seen;
}

}  // namespace

TEST(Progress, AdvancesWhenMeanReachesThreshold) {
  // Prompts outside the KB have m = 1, so a prompt-only ladder scores 100.
  World w = world_with_levels({{"alpha", "beta", "gamma"}, {"delta", "epsilon", "zeta"}});
  EXPECT_EQ(play_level_pass(w, 0), (std::set<std::string>{"alpha", "beta", "gamma"}));
  const auto p = w.sessions->progress("ada", wl::Language::EN);
  EXPECT_EQ(p.level, 2);
  EXPECT_TRUE(p.words_played_in_level.empty());
  EXPECT_TRUE(p.scores_in_level.empty());
  EXPECT_EQ(play_level_pass(w, 10), (std::set<std::string>{"delta", "epsilon", "zeta"}));
  EXPECT_EQ(w.sessions->progress("ada", wl::Language::EN).level, 2);  // capped at the top level
}

TEST(Progress, RetainsLevelBelowThreshold) {
  // Fox-chain prompts have m = 6, so prompt-only ladders score 100/6.
  World w = world_with_levels({{"fox", "canine", "mammal"}, {"delta", "epsilon", "zeta"}});
  play_level_pass(w, 0);
  const auto p = w.sessions->progress("ada", wl::Language::EN);
  EXPECT_EQ(p.level, 1);
  EXPECT_TRUE(p.words_played_in_level.empty());
  EXPECT_EQ(play_level_pass(w, 5), (std::set<std::string>{"fox", "canine", "mammal"}));
}

TEST(Progress, AbandonedMatchesCountAsZero) {
  World w = world_with_levels({{"alpha", "beta"}, {"delta"}});
  for (std::uint64_t i = 0; i < 2; ++i) {
    w.sessions->start_match({"ada"}, wl::GameMode::individual, wl::Language::EN, i);
  }
  // The next start closes the pass with two zero scores.
  w.sessions->start_match({"ada"}, wl::GameMode::individual, wl::Language::EN, 9);
  const auto p = w.sessions->progress("ada", wl::Language::EN);
  EXPECT_EQ(p.level, 1);
  EXPECT_EQ(p.words_played_in_level.size(), 1u);
}

TEST(Persistence, DiskStoreRestoresState) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("wl-sessions-" + std::to_string(std::random_device{}()));
  std::string match_id;
  double score = 0;
  {
    World w(fixtures::fox_edges_full(), std::make_shared<wl::DiskStore>(dir));
    w.sessions->register_user(profile("ada"));
    const auto m = w.sessions->start_match({"ada"}, wl::GameMode::individual, wl::Language::EN, 1);
    match_id = m.match_id;
    score = w.sessions->submit_ladder(m.match_id, "ada", fixtures::good_fox_ladder()).score;
    w.sessions->graphs().snapshot(wl::Language::EN, "fox");
  }
  World again(fixtures::fox_edges_full(), std::make_shared<wl::DiskStore>(dir));
  again.sessions->restore();
  ASSERT_TRUE(again.sessions->find_user("ada"));
  const auto m = again.sessions->match(match_id);
  EXPECT_EQ(m.state, wl::MatchState::scored);
  EXPECT_DOUBLE_EQ(m.results.at("ada").score, score);
  EXPECT_EQ(again.sessions->ladder_records().size(), 1u);
  const auto g = again.sessions->graphs().snapshot(wl::Language::EN, "fox");
  ASSERT_TRUE(g);
  EXPECT_EQ(g->total_plays(), 1u);
  EXPECT_EQ(g->find_arc(wl::Side::hypo, "fox", "grey fox")->play_count, 1u);
  const auto board = again.sessions->leaderboard({});
  EXPECT_EQ(board[0].games, 1u);
  // Fresh ids continue after the restored ones.
  const auto next = again.sessions->start_match({"ada"}, wl::GameMode::individual, wl::Language::EN, 2);
  EXPECT_NE(next.match_id, match_id);
  std::filesystem::remove_all(dir);
}

TEST(Pii, NoPersistedDocumentCarriesContactOrLocationFields) {
  for (const auto& field : wl::profile_fields()) EXPECT_FALSE(kPii.count(field)) << field;
  for (auto c : {wl::Collection::users, wl::Collection::matches, wl::Collection::ladders,
                 wl::Collection::graphs, wl::Collection::specificity}) {
    for (const auto& col : wl::export_columns(c)) EXPECT_FALSE(kPii.count(col)) << col;
  }
  // Any profile document smuggling a PII key is refused before it is stored.
  for (const auto& key : kPii) {
    auto doc = wl::to_json(profile("ada"));
    doc[key] = "x";
    EXPECT_THROW(wl::profile_from_json(doc), wl::ValidationError) << key;
  }

  std::mt19937 rng(41);
  auto store = std::make_shared<wl::MemoryStore>();
  World w(fixtures::fox_edges_full(), store);
  for (int u = 0; u < 6; ++u) w.sessions->register_user(profile("p" + std::to_string(u)));
  const std::vector<std::string> pool{"canine", "mammal", "animal", "living being", "dog"};
  for (int i = 0; i < 40; ++i) {
    const std::string nick = "p" + std::to_string(rng() % 6);
    const auto m = w.sessions->start_match({nick}, wl::GameMode::individual, wl::Language::EN, i);
    w.advance(rng() % 130);
    wl::Ladder l;
    l.prompt = "fox";
    std::set<std::string> used;
    for (std::size_t k = rng() % 4; k > 0; --k) {
      const auto& r = pool[rng() % pool.size()];
      if (used.insert(r).second) l.ascent.push_back(r);
    }
    try {
      w.sessions->submit_ladder(m.match_id, nick, l);
    } catch (const wl::ExpiredError&) {
    }
  }
  std::set<std::string> keys;
  for (const std::string c : {"users", "matches", "ladders", "progress"}) {
    for (const auto& doc : store->load(c)) collect_keys(doc, keys);
  }
  for (const auto& doc : store->load_graphs()) collect_keys(doc, keys);
  for (const auto& k : keys) EXPECT_FALSE(kPii.count(k)) << k;
  ASSERT_FALSE(keys.empty());
}

TEST(Resources, PromptPoolIsKnownUnblockedNorms) {
  std::vector<wl::LexicalEntry> norms;
  for (const std::string w : {"fox", "canine", "mammal", "animal", "banana", "knife"}) {
    norms.push_back({w, wl::Language::EN, wl::PartOfSpeech::noun, 4.0, 4.0, 4.0, false});
  }
  auto edges = fixtures::fox_edges_full();
  edges.emplace_back("knife", "tool");
  const auto r = wl::make_language_resources(norms, fixtures::make_kb(edges), {"knife"}, 2);
  EXPECT_EQ(r.levels.level_count(), 2);
  EXPECT_EQ(r.levels.assignment.size(), 4u);  // banana is unknown to the KB, knife is blocked
  EXPECT_FALSE(r.levels.assignment.count("banana"));
  EXPECT_FALSE(r.levels.assignment.count("knife"));
  EXPECT_TRUE(r.vocabulary.contains("banana"));
  EXPECT_TRUE(r.vocabulary.contains("grey fox"));
  EXPECT_TRUE(r.blocklist.count("knife"));
  EXPECT_THROW(wl::make_language_resources(norms, fixtures::make_kb(edges), {}, 10), wl::ValidationError);
}
