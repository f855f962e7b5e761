#pragma once

#include <memory>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wordladders/lexicon.hpp"
#include "wordladders/ladder_graph.hpp"

namespace fixtures {

// Taxonomy behind the good English "fox" ladder.
inline oracle::EdgeList fox_edges() {
  return {{"fox", "canine"}, {"canine", "mammal"}, {"mammal", "animal"}, {"animal", "living being"}};
}

inline oracle::EdgeList fox_edges_full() {
  auto edges = fox_edges();
  edges.emplace_back("grey fox", "fox");
  return edges;
}

inline wordladders::KnowledgeBase make_kb(const oracle::EdgeList& edges,
                                          wordladders::Language lang = wordladders::Language::EN) {
  std::vector<wordladders::TaxonomyEdge> out;
  for (const auto& [lo, hi] : edges) out.push_back({lo, hi, lang});
  return wordladders::KnowledgeBase(lang, std::move(out));
}

// "living being, animal, mammal, canine, FOX, grey fox"
inline wordladders::Ladder good_fox_ladder() {
  wordladders::Ladder l;
  l.prompt = "fox";
  l.ascent = {"canine", "mammal", "animal", "living being"};
  l.descent = {"grey fox"};
  return l;
}

// "world, solar system, planet, earth, race, species, apes, monkey, animal, FOX"
inline wordladders::Ladder bad_fox_ladder() {
  wordladders::Ladder l;
  l.prompt = "fox";
  l.ascent = {"animal", "monkey", "apes", "species", "race", "earth", "planet", "solar system",
              "world"};
  return l;
}

inline std::string data_path(const std::string& name) {
  return std::string(WORDLADDERS_TEST_DATA_DIR) + "/" + name;
}

}  // namespace fixtures
