#include "wordladders/ladder_graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "wordladders/error.hpp"

namespace wordladders {

using nlohmann::json;

std::string_view to_string(GameMode mode) {
  switch (mode) {
    case GameMode::individual: return "individual";
    case GameMode::challenge: return "challenge";
    case GameMode::team: return "team";
  }
  return "individual";
}

std::optional<GameMode> parse_game_mode(std::string_view text) {
  if (text == "individual") return GameMode::individual;
  if (text == "challenge") return GameMode::challenge;
  if (text == "team" || text == "group") return GameMode::team;
  return std::nullopt;
}

std::string_view to_string(Side side) { return side == Side::hyper ? "hyper" : "hypo"; }

void normalize_and_validate(Ladder& ladder) {
  ladder.prompt = normalize_lemma(ladder.prompt);
  if (ladder.prompt.empty()) throw ValidationError("ladder prompt is empty");
  std::unordered_set<std::string> seen{ladder.prompt};
  auto check_side = [&](std::vector<std::string>& rungs, std::string_view side) {
    for (std::size_t i = 0; i < rungs.size(); ++i) {
      rungs[i] = normalize_lemma(rungs[i]);
      if (rungs[i].empty()) {
        throw ValidationError("empty rung at " + std::string(side) + " position " +
                              std::to_string(i + 1));
      }
      if (!seen.insert(rungs[i]).second) {
        throw ValidationError("'" + rungs[i] + "' appears more than once in the ladder");
      }
    }
  };
  check_side(ladder.ascent, "ascent");
  check_side(ladder.descent, "descent");
  if (ladder.duration_used < 0.0) throw ValidationError("negative ladder duration");
}

json to_json(const Ladder& ladder) {
  return {{"prompt", ladder.prompt},
          {"ascent", ladder.ascent},
          {"descent", ladder.descent},
          {"language", to_string(ladder.language)},
          {"mode", to_string(ladder.mode)},
          {"duration_used", ladder.duration_used}};
}

Ladder ladder_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("ladder must be a JSON object");
  Ladder ladder;
  try {
    ladder.prompt = doc.value("prompt", std::string{});
    ladder.ascent = doc.value("ascent", std::vector<std::string>{});
    ladder.descent = doc.value("descent", std::vector<std::string>{});
    if (doc.contains("language")) {
      const auto lang = parse_language(doc.at("language").get<std::string>());
      if (!lang) throw ValidationError("unknown language");
      ladder.language = *lang;
    }
    if (doc.contains("mode")) {
      const auto mode = parse_game_mode(doc.at("mode").get<std::string>());
      if (!mode) throw ValidationError("unknown game mode");
      ladder.mode = *mode;
    }
    ladder.duration_used = doc.value("duration_used", 0.0);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed ladder: ") + e.what());
  }
  return ladder;
}

// --- PlayGraph --------------------------------------------------------------

PlayGraph::PlayGraph(std::string root, Language lang, int max_length)
    : root_(std::move(root)), language_(lang), max_length_(std::max(1, max_length)) {}

std::vector<Arc> PlayGraph::arcs(Side side) const {
  std::vector<Arc> out;
  out.reserve(side_arcs(side).size());
  for (const auto& [key, arc] : side_arcs(side)) out.push_back(arc);
  return out;
}

const Arc* PlayGraph::find_arc(Side side, std::string_view from, std::string_view to) const {
  const auto& arcs = side_arcs(side);
  const auto it = arcs.find({std::string(from), std::string(to)});
  return it == arcs.end() ? nullptr : &it->second;
}

void PlayGraph::add_arc(Arc arc) {
  if (arc.from == arc.to) throw ValidationError("self-loop arc on '" + arc.from + "'");
  if (arc.to == root_) throw ValidationError("arc may not point back to the root");
  auto& nodes = side_nodes(arc.side);
  auto [it, inserted] =
      side_arcs(arc.side).try_emplace({arc.from, arc.to}, arc);
  if (!inserted) {
    throw ValidationError("duplicate " + std::string(to_string(arc.side)) + " arc " + arc.from +
                          " -> " + arc.to);
  }
  if (arc.from != root_) nodes.insert(arc.from);
  nodes.insert(arc.to);
}

const Arc& PlayGraph::bump_arc(Side side, const std::string& from, const std::string& to,
                               bool in_kb) {
  auto& arcs = side_arcs(side);
  auto it = arcs.find({from, to});
  if (it == arcs.end()) {
    add_arc(Arc{from, to, side, 0, in_kb});
    it = arcs.find({from, to});
  }
  ++it->second.play_count;
  it->second.in_kb = it->second.in_kb || in_kb;
  return it->second;
}

void PlayGraph::observe_length(int validated_length) noexcept {
  max_length_ = std::max(max_length_, validated_length);
}

PlayGraph init_graph(std::string_view prompt, const KnowledgeBase& kb, int depth_cap) {
  const std::string root = normalize_lemma(prompt);
  const int up = kb.longest_chain_up(root, depth_cap);
  const int down = kb.longest_chain_down(root, depth_cap);
  PlayGraph graph(root, kb.language(), 1 + up + down);

  // Breadth-first from the root on each side; an arc is kept when its
  // source lies fewer than depth_cap steps from the root.
  auto expand = [&](Side side) {
    std::unordered_map<std::string, int> dist{{root, 0}};
    std::deque<std::string> queue{root};
    while (!queue.empty()) {
      const std::string node = queue.front();
      queue.pop_front();
      const int d = dist.at(node);
      if (d >= depth_cap) continue;
      const auto& next = side == Side::hyper ? kb.hypernyms_of(node) : kb.hyponyms_of(node);
      for (const auto& n : next) {
        graph.add_arc(Arc{node, n, side, 0, true});
        if (dist.try_emplace(n, d + 1).second) queue.push_back(n);
      }
    }
  };
  expand(Side::hyper);
  expand(Side::hypo);
  return graph;
}

void record_play(PlayGraph& graph, const Ladder& ladder, const KnowledgeBase* kb,
                 ValidityMode mode) {
  if (ladder.prompt != graph.root()) {
    throw ValidationError("ladder prompt '" + ladder.prompt + "' does not match graph root '" +
                          graph.root() + "'");
  }
  // Check before mutating so a rejected ladder leaves the graph untouched.
  std::unordered_set<std::string> seen{ladder.prompt};
  for (const auto* side : {&ladder.ascent, &ladder.descent}) {
    for (const auto& rung : *side) {
      if (rung.empty() || !seen.insert(rung).second) {
        throw ValidationError("ladder has an empty or repeated rung");
      }
    }
  }

  std::string prev = graph.root();
  for (const auto& rung : ladder.ascent) {
    const bool known = kb && is_generalization(*kb, prev, rung, mode);
    graph.bump_arc(Side::hyper, prev, rung, known);
    prev = rung;
  }
  prev = graph.root();
  for (const auto& rung : ladder.descent) {
    const bool known = kb && is_generalization(*kb, rung, prev, mode);
    graph.bump_arc(Side::hypo, prev, rung, known);
    prev = rung;
  }
  graph.increment_plays();
}

// --- serialization ----------------------------------------------------------

json serialize_graph(const PlayGraph& graph) {
  json nodes = json::array();
  nodes.push_back({{"lemma", graph.root()}, {"side", "root"}});
  std::map<std::pair<std::string, Side>, std::size_t> index;
  for (Side side : {Side::hyper, Side::hypo}) {
    for (const auto& lemma : graph.nodes(side)) {
      index[{lemma, side}] = nodes.size();
      nodes.push_back({{"lemma", lemma}, {"side", to_string(side)}});
    }
  }
  auto idx = [&](const std::string& lemma, Side side) -> std::size_t {
    return lemma == graph.root() ? 0 : index.at({lemma, side});
  };
  auto arcs = [&](Side side) {
    json out = json::array();
    for (const auto& a : graph.arcs(side)) {
      out.push_back(json::array({idx(a.from, side), idx(a.to, side), a.play_count, a.in_kb}));
    }
    return out;
  };
  return {{"root", graph.root()},
          {"language", to_string(graph.language())},
          {"total_plays", graph.total_plays()},
          {"max_length", graph.max_length()},
          {"nodes", std::move(nodes)},
          {"hyper_arcs", arcs(Side::hyper)},
          {"hypo_arcs", arcs(Side::hypo)}};
}

PlayGraph deserialize_graph(const json& doc) {
  try {
    const auto lang = parse_language(doc.at("language").get<std::string>());
    if (!lang) throw ValidationError("unknown graph language");
    const std::string root = doc.at("root").get<std::string>();
    const int max_length = doc.at("max_length").get<int>();
    if (max_length < 1) throw ValidationError("max_length must be >= 1");

    const auto& nodes = doc.at("nodes");
    if (!nodes.is_array() || nodes.empty()) throw ValidationError("graph has no nodes");
    struct Node {
      std::string lemma;
      std::string side;
    };
    std::vector<Node> table;
    std::set<std::pair<std::string, std::string>> unique;
    for (const auto& n : nodes) {
      Node node{n.at("lemma").get<std::string>(), n.at("side").get<std::string>()};
      if (node.side != "root" && node.side != "hyper" && node.side != "hypo") {
        throw ValidationError("unknown node side '" + node.side + "'");
      }
      if (!unique.emplace(node.lemma, node.side).second) {
        throw ValidationError("duplicate node '" + node.lemma + "'");
      }
      table.push_back(std::move(node));
    }
    if (table[0].side != "root" || table[0].lemma != root) {
      throw ValidationError("first node must be the root");
    }
    for (std::size_t i = 1; i < table.size(); ++i) {
      if (table[i].side == "root") throw ValidationError("more than one root node");
      if (table[i].lemma == root) throw ValidationError("root lemma listed as a side node");
    }

    PlayGraph graph(root, *lang, max_length);
    for (Side side : {Side::hyper, Side::hypo}) {
      const std::string side_name(to_string(side));
      for (const auto& a : doc.at(side_name + "_arcs")) {
        if (!a.is_array() || a.size() != 4) throw ValidationError("arc must be a 4-tuple");
        const auto from = a.at(0).get<std::size_t>();
        const auto to = a.at(1).get<std::size_t>();
        if (from >= table.size() || to >= table.size()) throw ValidationError("arc index out of range");
        for (std::size_t end : {from, to}) {
          if (end != 0 && table[end].side != side_name) {
            throw ValidationError("arc joins a " + table[end].side + " node on the " + side_name +
                                  " side: cross-side arcs are not allowed");
          }
        }
        graph.add_arc(Arc{table[from].lemma, table[to].lemma, side, a.at(2).get<std::uint64_t>(),
                          a.at(3).get<bool>()});
      }
    }
    // The in-memory graph has no isolated nodes, so neither may the document.
    for (std::size_t i = 1; i < table.size(); ++i) {
      const Side side = table[i].side == "hyper" ? Side::hyper : Side::hypo;
      if (!graph.nodes(side).count(table[i].lemma)) {
        throw ValidationError("node '" + table[i].lemma + "' has no incident arc");
      }
    }
    graph.set_total_plays(doc.at("total_plays").get<std::uint64_t>());
    return graph;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed graph document: ") + e.what());
  }
}

}  // namespace wordladders
