#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "wordladders/config.hpp"
#include "wordladders/ladder_graph.hpp"
#include "wordladders/lexicon.hpp"

namespace wordladders {

struct MatchResult {
  double score = 0.0;  // s after the time bonus, [0,100]
  int stars = 1;
  int ul = 1;
  int ulv = 1;
  double npl = 0.2;
  std::uint64_t np = 0;
  int m = 1;
  double elapsed = 0.0;
  std::vector<bool> ascent_valid;
  std::vector<bool> descent_valid;

  int display_score() const noexcept;  // rounded half-up
};

nlohmann::json to_json(const MatchResult& result);
MatchResult match_result_from_json(const nlohmann::json& doc);

// Blending weight: np/g clamped to [0.2, 0.8]. Throws ValidationError if g <= 0.
double compute_npl(std::uint64_t np, int g);

struct ValidatedLength {
  int ulv = 1;
  std::vector<bool> ascent_valid;
  std::vector<bool> descent_valid;
};

// Whether the step prev -> next on `side` counts as validated: a KB
// generalization under `mode`, or a graph arc that passes arc_is_valid.
bool step_is_valid(Side side, const std::string& prev, const std::string& next,
                   const PlayGraph& graph, const KnowledgeBase& kb,
                   std::uint64_t n_threshold, ValidityMode mode);

// ulv and per-rung flags. Throws ValidationError on prompt mismatch.
ValidatedLength validated_length(const Ladder& ladder, const PlayGraph& graph,
                                 const KnowledgeBase& kb, std::uint64_t n_threshold,
                                 ValidityMode mode = ValidityMode::transitive,
                                 UlvMode ulv_mode = UlvMode::chain);

double compute_score(double npl, int ul, int ulv, int m);

// Adds up to 10 points, linear in the unused share of the match window,
// and caps at 100.
double apply_time_bonus(double score, double elapsed, double match_duration = 120.0);

int stars(double score);

// Full evaluation of a ladder against a graph that already includes the
// play. `prior_plays` is np for the graph source (plays before this one).
MatchResult evaluate_ladder(const Ladder& ladder, const PlayGraph& graph,
                            const KnowledgeBase& kb, std::uint64_t prior_plays,
                            double elapsed, const EngineConfig& config);

}  // namespace wordladders
