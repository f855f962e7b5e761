#include "wordladders/cleaning.hpp"

#include <algorithm>

namespace wordladders {

using nlohmann::json;

Vocabulary::Vocabulary(const std::vector<LexicalEntry>& entries) {
  for (const auto& e : entries) add(e.lemma);
}

void Vocabulary::add(std::string_view lemma) {
  std::string word = normalize_lemma(lemma);
  if (word.empty() || !words_.insert(word).second) return;
  std::u32string cps = to_code_points(word);
  by_length_[cps.size()].emplace_back(std::move(cps), std::move(word));
}

void Vocabulary::add_all(const KnowledgeBase& kb) {
  for (const auto& e : kb.edges()) {
    add(e.hyponym);
    add(e.hypernym);
  }
}

bool within_one_edit(std::u32string_view a, std::u32string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  if (b.size() - a.size() > 1) return false;
  std::size_t i = 0;
  while (i < a.size() && a[i] == b[i]) ++i;
  if (a.size() == b.size()) {
    return i < a.size() && a.substr(i + 1) == b.substr(i + 1);
  }
  return a.substr(i) == b.substr(i + 1);
}

std::vector<std::string> Vocabulary::neighbours(std::string_view word) const {
  const std::u32string cps = to_code_points(word);
  std::vector<std::string> out;
  for (std::size_t len : {cps.size() - 1, cps.size(), cps.size() + 1}) {
    if (len > cps.size() + 1) continue;  // wrapped around for empty input
    const auto it = by_length_.find(len);
    if (it == by_length_.end()) continue;
    for (const auto& [candidate, utf8] : it->second) {
      if (within_one_edit(cps, candidate)) out.push_back(utf8);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TypoCorrection correct_typos(const Ladder& ladder, const Vocabulary& vocabulary) {
  TypoCorrection out{ladder, {}};
  std::unordered_set<std::string> used{ladder.prompt};
  for (const auto* side : {&ladder.ascent, &ladder.descent}) used.insert(side->begin(), side->end());

  for (auto* side : {&out.ladder.ascent, &out.ladder.descent}) {
    for (auto& rung : *side) {
      if (vocabulary.contains(rung)) continue;
      const auto candidates = vocabulary.neighbours(rung);
      // Only an unambiguous fix that keeps the ladder free of repeats.
      if (candidates.size() != 1 || used.count(candidates.front())) continue;
      out.corrections.push_back({rung, candidates.front()});
      used.insert(candidates.front());
      rung = candidates.front();
    }
  }
  return out;
}

std::string_view to_string(RemovalReason reason) {
  return reason == RemovalReason::blocked ? "blocked" : "nonword";
}

StripResult strip_invalid(const Ladder& ladder, const Vocabulary& vocabulary,
                          const std::unordered_set<std::string>& blocklist) {
  StripResult out{ladder, {}, {}};
  for (auto* side : {&out.ladder.ascent, &out.ladder.descent}) {
    for (std::size_t i = 0; i < side->size(); ++i) {
      const std::string& rung = (*side)[i];
      std::optional<RemovalReason> reason;
      if (blocklist.count(rung)) {
        reason = RemovalReason::blocked;
      } else if (!vocabulary.contains(rung)) {
        reason = RemovalReason::nonword;
      }
      if (!reason) continue;
      out.removed.push_back({rung, *reason});
      out.truncated.insert(out.truncated.end(), side->begin() + static_cast<std::ptrdiff_t>(i) + 1,
                           side->end());
      side->resize(i);
      break;
    }
  }
  return out;
}

BadLadderVerdict flag_bad_ladder(const Ladder& ladder, const KnowledgeBase& kb,
                                 const PlayGraph* graph, double tau, const EngineConfig& config) {
  const auto threshold = static_cast<std::uint64_t>(config.crowd_threshold);
  std::size_t total = 0;
  std::size_t valid = 0;
  auto walk = [&](const std::vector<std::string>& rungs, Side side) {
    const std::string* prev = &ladder.prompt;
    for (const auto& rung : rungs) {
      ++total;
      const bool kb_ok = side == Side::hyper ? is_generalization(kb, *prev, rung, config.validity)
                                             : is_generalization(kb, rung, *prev, config.validity);
      const Arc* arc = graph && graph->root() == ladder.prompt ? graph->find_arc(side, *prev, rung)
                                                               : nullptr;
      if (kb_ok || (arc && arc_is_valid(*arc, threshold))) ++valid;
      prev = &rung;
    }
  };
  walk(ladder.ascent, Side::hyper);
  walk(ladder.descent, Side::hypo);

  BadLadderVerdict v;
  v.kb_valid_fraction = total == 0 ? 1.0 : static_cast<double>(valid) / static_cast<double>(total);
  v.bad = v.kb_valid_fraction < tau;
  return v;
}

json to_json(const CleaningReport& r) {
  json corrections = json::array();
  for (const auto& c : r.corrections) {
    corrections.push_back({{"original", c.original}, {"corrected", c.corrected}});
  }
  json removed = json::array();
  for (const auto& rm : r.removed) {
    removed.push_back({{"lemma", rm.lemma}, {"reason", to_string(rm.reason)}});
  }
  return {{"ladder_id", r.ladder_id},
          {"cleaned", to_json(r.cleaned)},
          {"corrections", std::move(corrections)},
          {"removed", std::move(removed)},
          {"truncated", r.truncated},
          {"bad_ladder", r.bad_ladder},
          {"kb_valid_fraction", r.kb_valid_fraction}};
}

CleaningReport clean_ladder(std::string ladder_id, const Ladder& ladder,
                            const Vocabulary& vocabulary,
                            const std::unordered_set<std::string>& blocklist,
                            const KnowledgeBase& kb, const PlayGraph* graph,
                            const EngineConfig& config) {
  auto typo = correct_typos(ladder, vocabulary);
  auto stripped = strip_invalid(typo.ladder, vocabulary, blocklist);
  const auto verdict = flag_bad_ladder(stripped.ladder, kb, graph, config.bad_ladder_tau, config);

  CleaningReport report;
  report.ladder_id = std::move(ladder_id);
  report.cleaned = std::move(stripped.ladder);
  report.corrections = std::move(typo.corrections);
  report.removed = std::move(stripped.removed);
  report.truncated = std::move(stripped.truncated);
  report.bad_ladder = verdict.bad;
  report.kb_valid_fraction = verdict.kb_valid_fraction;
  return report;
}

}  // namespace wordladders
