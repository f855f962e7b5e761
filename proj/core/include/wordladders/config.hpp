#pragma once

#include <cstdint>

namespace wordladders {

// Generalization test against the knowledge base.
enum class ValidityMode { direct, transitive };

// How the validated ladder length counts rungs: truncated at the first
// invalid arc (chain) or every individually valid rung (count).
enum class UlvMode { chain, count };

// What np in the blending weight measures: plays of the prompt's graph,
// or the least-played arc of the submitted ladder.
enum class PlaysSource { graph, arc };

struct EngineConfig {
  int plays_for_good_evaluation = 50;  // g
  int crowd_threshold = 50;            // N
  double bad_ladder_tau = 0.5;
  double advance_threshold = 50.0;
  int depth_cap = 10;
  int n_levels = 50;
  int words_per_level = 10;
  double match_duration_s = 120.0;
  std::uint64_t specificity_target = 100;
  ValidityMode validity = ValidityMode::transitive;
  UlvMode ulv_mode = UlvMode::chain;
  PlaysSource plays_source = PlaysSource::graph;
};

}  // namespace wordladders
