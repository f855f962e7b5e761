#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wordladders/config.hpp"
#include "wordladders/lexicon.hpp"
#include "wordladders/text.hpp"

namespace wordladders {

enum class GameMode { individual, challenge, team };

std::string_view to_string(GameMode mode);
std::optional<GameMode> parse_game_mode(std::string_view text);

// One submission. `ascent` runs from the rung just above the prompt to the
// most generic word; `descent` from just below the prompt to the most
// specific word.
struct Ladder {
  std::string prompt;
  std::vector<std::string> ascent;
  std::vector<std::string> descent;
  Language language = Language::EN;
  GameMode mode = GameMode::individual;
  double duration_used = 0.0;

  // ul: the prompt plus every rung.
  int length() const noexcept {
    return 1 + static_cast<int>(ascent.size() + descent.size());
  }

  friend bool operator==(const Ladder&, const Ladder&) = default;
};

// Normalizes every lemma in place and enforces the structural rules: no
// blank lemma, no lemma twice. Throws ValidationError naming the offender.
void normalize_and_validate(Ladder& ladder);

nlohmann::json to_json(const Ladder& ladder);
Ladder ladder_from_json(const nlohmann::json& doc);

enum class Side { hyper, hypo };

std::string_view to_string(Side side);

// Arcs always point away from the root: on the hyper side `to` is the more
// generic word, on the hypo side `to` is the more specific one.
struct Arc {
  std::string from;
  std::string to;
  Side side = Side::hyper;
  std::uint64_t play_count = 0;
  bool in_kb = false;

  friend bool operator==(const Arc&, const Arc&) = default;
};

// Per-prompt play graph. Nodes are keyed by (lemma, side): the same word can
// sit on both sides as two distinct nodes, and an arc only ever joins nodes
// of its own side (or the root), so no hyper/hypo crossing can be built.
class PlayGraph {
 public:
  PlayGraph() = default;
  PlayGraph(std::string root, Language lang, int max_length = 1);

  const std::string& root() const noexcept { return root_; }
  Language language() const noexcept { return language_; }
  const std::set<std::string>& nodes(Side side) const noexcept {
    return side == Side::hyper ? hyper_nodes_ : hypo_nodes_;
  }
  std::vector<Arc> arcs(Side side) const;
  std::size_t arc_count(Side side) const noexcept { return side_arcs(side).size(); }
  const Arc* find_arc(Side side, std::string_view from, std::string_view to) const;

  std::uint64_t total_plays() const noexcept { return total_plays_; }  // np
  int max_length() const noexcept { return max_length_; }              // m

  // Throws ValidationError for a duplicate arc, an arc touching the root on
  // the wrong end, or a self-loop.
  void add_arc(Arc arc);

  // Adds one play to (from, to), creating the arc if needed. An existing
  // arc keeps its KB flag unless `in_kb` upgrades it.
  const Arc& bump_arc(Side side, const std::string& from, const std::string& to,
                      bool in_kb);

  void set_total_plays(std::uint64_t plays) noexcept { total_plays_ = plays; }
  void increment_plays() noexcept { ++total_plays_; }
  void observe_length(int validated_length) noexcept;

  friend bool operator==(const PlayGraph&, const PlayGraph&) = default;

 private:
  using ArcMap = std::map<std::pair<std::string, std::string>, Arc>;
  const ArcMap& side_arcs(Side side) const noexcept {
    return side == Side::hyper ? hyper_arcs_ : hypo_arcs_;
  }
  ArcMap& side_arcs(Side side) noexcept {
    return side == Side::hyper ? hyper_arcs_ : hypo_arcs_;
  }
  std::set<std::string>& side_nodes(Side side) noexcept {
    return side == Side::hyper ? hyper_nodes_ : hypo_nodes_;
  }

  std::string root_;
  Language language_ = Language::EN;
  std::set<std::string> hyper_nodes_;
  std::set<std::string> hypo_nodes_;
  ArcMap hyper_arcs_;
  ArcMap hypo_arcs_;
  std::uint64_t total_plays_ = 0;
  int max_length_ = 1;
};

// Pre-generates the graph of `prompt` from every KB chain above and below it,
// up to `depth_cap` arcs away. m starts at the longest such chain through the
// prompt (counted in words, so at least 1).
PlayGraph init_graph(std::string_view prompt, const KnowledgeBase& kb, int depth_cap = 10);

// Records one play. Throws ValidationError (graph untouched) if the ladder's
// prompt is not the graph root. With a KB, newly created arcs get their
// in_kb flag from `is_generalization` under `mode`.
void record_play(PlayGraph& graph, const Ladder& ladder,
                 const KnowledgeBase* kb = nullptr,
                 ValidityMode mode = ValidityMode::transitive);

constexpr bool arc_is_valid(const Arc& arc, std::uint64_t n_threshold) noexcept {
  return arc.in_kb || arc.play_count >= n_threshold;
}

// Compressed form: `nodes` (index 0 is the root), `hyper_arcs` and
// `hypo_arcs` as [from_index, to_index, play_count, in_kb] tuples.
nlohmann::json serialize_graph(const PlayGraph& graph);
PlayGraph deserialize_graph(const nlohmann::json& doc);

}  // namespace wordladders
