#include <algorithm>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "service_harness.hpp"
#include "wordladders/csv.hpp"

using nlohmann::json;
using fixtures::Service;
using fixtures::user_body;

namespace {

json body_of(const httplib::Result& r) { return json::parse(r->body); }

std::string start_match(const Service& s, const json& participants, const std::string& mode = "individual") {
  auto r = s.post("/matches", {{"participants", participants}, {"mode", mode}, {"language", "EN"}, {"seed", 7}});
  EXPECT_EQ(r->status, 201) << r->body;
  return body_of(r)["match_id"];
}

json submit(const Service& s, const std::string& id, const std::string& nick,
            const std::vector<std::string>& up, const std::vector<std::string>& down, int* status = nullptr) {
  auto r = s.post("/matches/" + id + "/ladder",
                  {{"nickname", nick}, {"prompt", "fox"}, {"ascent", up}, {"descent", down}});
  if (status) *status = r->status;
  return body_of(r);
}

// Arc counts read back from a serialized graph, keyed like PlayTally.
std::map<std::tuple<std::string, std::string, std::string>, std::uint64_t> raw_counts(const json& g) {
  std::map<std::tuple<std::string, std::string, std::string>, std::uint64_t> out;
  const auto& nodes = g.at("nodes");
  for (const std::string side : {"hyper", "hypo"}) {
    for (const auto& a : g.at(side + "_arcs")) {
      const auto from = nodes.at(a[0].get<std::size_t>()).at("lemma").get<std::string>();
      const auto to = nodes.at(a[1].get<std::size_t>()).at("lemma").get<std::string>();
      const auto plays = a[2].get<std::uint64_t>();
      if (plays > 0) out[{side, from, to}] = plays;
    }
  }
  return out;
}

}  // namespace

TEST(Service, HealthAndUsers) {
  Service s;
  ASSERT_GT(s.port, 0);
  auto health = s.client().Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);

  auto created = s.post("/users", user_body("ada"));
  EXPECT_EQ(created->status, 201);
  EXPECT_EQ(body_of(created)["nickname"], "ada");
  EXPECT_EQ(s.post("/users", user_body("ada"))->status, 409);
  auto with_email = user_body("bob");
  with_email["email"] = "bob@example.org";
  EXPECT_EQ(s.post("/users", with_email)->status, 400);
  EXPECT_EQ(s.client().Post("/users", "{not json", "application/json")->status, 400);

  auto fetched = s.client().Get("/users/ada");
  EXPECT_EQ(fetched->status, 200);
  EXPECT_EQ(body_of(fetched)["education"], "bachelor");
  EXPECT_EQ(s.client().Get("/users/nobody")->status, 404);
}

TEST(Service, MatchLifecycle) {
  Service s;
  s.post("/users", user_body("ada"));
  s.post("/users", user_body("bob"));
  EXPECT_EQ(s.post("/matches", {{"participants", {"ada"}}, {"mode", "challenge"}})->status, 400);
  EXPECT_EQ(s.post("/matches", {{"participants", {"eve"}}})->status, 404);

  const std::string id = start_match(s, {"ada"});
  auto m = s.client().Get("/matches/" + id);
  EXPECT_EQ(m->status, 200);
  EXPECT_EQ(body_of(m)["state"], "open");
  EXPECT_EQ(body_of(m)["prompt"], "fox");

  int status = 0;
  submit(s, id, "bob", {"canine"}, {}, &status);
  EXPECT_EQ(status, 403);
  submit(s, id, "ada", {"canine", "canine"}, {}, &status);
  EXPECT_EQ(status, 400);

  s.world.advance(100);
  const json r = submit(s, id, "ada", {"canine", "mammal", "animal", "living being"}, {"grey fox"}, &status);
  EXPECT_EQ(status, 200);
  EXPECT_EQ(r["stars"], 5);
  EXPECT_NEAR(r["score"].get<double>(), 100.0, 1e-9);
  EXPECT_EQ(r["match_state"], "scored");
  submit(s, id, "ada", {"canine"}, {}, &status);
  EXPECT_EQ(status, 409);
  EXPECT_EQ(s.client().Get("/matches/m-424242")->status, 404);
}

TEST(Service, ExpiredSubmissionIsGone) {
  Service s;
  s.post("/users", user_body("ada"));
  const std::string id = start_match(s, {"ada"});
  s.world.advance(121);
  int status = 0;
  submit(s, id, "ada", {"canine"}, {}, &status);
  EXPECT_EQ(status, 410);
  EXPECT_EQ(body_of(s.client().Get("/matches/" + id))["state"], "expired");
}

TEST(Service, Leaderboard) {
  Service s;
  s.post("/users", user_body("ada", "master"));
  s.post("/users", user_body("bob"));
  const std::string id = start_match(s, {"bob"});
  submit(s, id, "bob", {"canine"}, {});
  auto all = body_of(s.client().Get("/leaderboard"));
  ASSERT_EQ(all["entries"].size(), 2u);
  EXPECT_EQ(all["entries"][0]["nickname"], "bob");
  EXPECT_EQ(all["entries"][0]["rank"], 1);
  auto masters = body_of(s.client().Get("/leaderboard?education=master"));
  ASSERT_EQ(masters["entries"].size(), 1u);
  EXPECT_EQ(masters["entries"][0]["nickname"], "ada");
  EXPECT_TRUE(body_of(s.client().Get("/leaderboard?education=wizard"))["entries"].empty());
  EXPECT_EQ(s.client().Get("/leaderboard?shoe=9")->status, 400);
}

TEST(Service, ExportRequiresToken) {
  Service s;
  EXPECT_EQ(s.client().Get("/export/filter?collection=users")->status, 401);
  EXPECT_EQ(s.client().Get("/export/raw?word=fox&language=EN")->status, 401);
  auto wrong = s.client();
  wrong.set_bearer_token_auth("nope");
  EXPECT_EQ(wrong.Get("/export/filter?collection=users")->status, 401);
  EXPECT_EQ(s.client(true).Get("/export/filter?collection=users")->status, 200);
  EXPECT_EQ(s.client(true).Get("/export/filter?collection=bogus")->status, 400);
  EXPECT_EQ(s.client(true).Get("/export/filter?collection=users&format=xml")->status, 400);
  EXPECT_EQ(s.client(true).Get("/export/filter?collection=users&filter=%7B%22email%22%3A1%7D")->status, 400);
}

TEST(Service, ExportFiltersAndFormatsAgree) {
  Service s;
  for (auto n : {"ada", "bob", "cy"}) s.post("/users", user_body(n));
  const std::vector<std::pair<std::string, std::vector<std::string>>> plays{
      {"ada", {"canine", "mammal"}}, {"bob", {"canine"}}, {"cy", {}}, {"ada", {"canine", "dog"}}};
  for (const auto& [nick, up] : plays) {
    const std::string id = start_match(s, {nick});
    submit(s, id, nick, up, {});
  }
  auto c = s.client(true);
  auto json_all = c.Get("/export/filter?collection=ladders&format=json");
  ASSERT_EQ(json_all->status, 200);
  EXPECT_EQ(json_all->get_header_value("X-Record-Count"), "4");
  const json rows = body_of(json_all);
  ASSERT_EQ(rows.size(), 4u);

  auto csv_all = c.Get("/export/filter?collection=ladders&format=csv");
  ASSERT_EQ(csv_all->status, 200);
  EXPECT_NE(csv_all->get_header_value("Content-Type").find("text/csv"), std::string::npos);
  const auto table = wordladders::csv::parse(csv_all->body);
  ASSERT_EQ(table.size(), 5u);
  const auto& header = table[0];
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  std::multiset<std::tuple<std::string, std::string, std::string, std::string>> from_json, from_csv;
  for (const auto& r : rows) {
    std::string ascent;
    for (const auto& a : r["ascent"]) ascent += (ascent.empty() ? "" : "|") + a.get<std::string>();
    from_json.insert({r["ladder_id"], r["nickname"], ascent, std::to_string(r["stars"].get<int>())});
  }
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& r = table[i];
    from_csv.insert({r[col("ladder_id")], r[col("nickname")], r[col("ascent")], r[col("stars")]});
  }
  EXPECT_EQ(from_json, from_csv);

  auto ada = body_of(c.Get("/export/filter?collection=ladders&nickname=ada"));
  EXPECT_EQ(ada.size(), 2u);
  auto long_ones = body_of(c.Get(R"(/export/filter?collection=ladders&filter={"ul":{"gte":3}})"));
  ASSERT_EQ(long_ones.size(), 2u);
  for (const auto& r : long_ones) EXPECT_GE(r["ul"].get<int>(), 3);

  auto lines = c.Get("/export/filter?collection=users&lines=1");
  std::size_t n = 0;
  for (char ch : lines->body) n += ch == '\n';
  EXPECT_EQ(n, 3u);
}

TEST(Service, RawGraphMatchesTally) {
  Service s;
  s.post("/users", user_body("ada"));
  fixtures::PlayTally tally;
  const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> ladders{
      {{"canine", "mammal"}, {"grey fox"}}, {{"canine"}, {}}, {{"dog"}, {"grey fox"}}};
  for (const auto& [up, down] : ladders) {
    const std::string id = start_match(s, {"ada"});
    submit(s, id, "ada", up, down);
    tally.add("fox", up, down);
  }
  auto raw = s.client(true).Get("/export/raw?word=fox&language=EN");
  ASSERT_EQ(raw->status, 200);
  const json g = body_of(raw);
  EXPECT_EQ(g["total_plays"], tally.plays);
  EXPECT_EQ(raw_counts(g), tally.arcs);
  EXPECT_EQ(s.client(true).Get("/export/raw?word=teapot&language=EN")->status, 404);
  // Known to the KB but never played: the initial graph.
  auto unplayed = s.client(true).Get("/export/raw?word=canine&language=EN");
  ASSERT_EQ(unplayed->status, 200);
  EXPECT_EQ(body_of(unplayed)["total_plays"], 0);
}

TEST(Service, SpecificityExport) {
  Service s;
  s.post("/users", user_body("ada"));
  const std::string id = start_match(s, {"ada"});
  submit(s, id, "ada", {"canine", "mammal", "animal", "living being"}, {"grey fox"});
  const json rows = body_of(s.client(true).Get("/export/filter?collection=specificity"));
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) {
    if (r["lemma"] == "fox") EXPECT_NEAR(r["mean"].get<double>(), 5.0 / 6, 1e-12);
    if (r["lemma"] == "grey fox") EXPECT_DOUBLE_EQ(r["mean"].get<double>(), 1.0);
  }
}

TEST(Service, TokenListParsing) {
  const auto tokens = wordladders::parse_research_tokens("lab:abc, def ,x:");
  ASSERT_GE(tokens.size(), 2u);
  EXPECT_EQ(tokens[0].label, "lab");
  EXPECT_EQ(tokens[0].token_id, "abc");
  EXPECT_EQ(tokens[1].token_id, "def");
}
