#include "wordladders/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wordladders/error.hpp"

namespace wordladders {

using nlohmann::json;

int MatchResult::display_score() const noexcept {
  return static_cast<int>(std::floor(score + 0.5));
}

json to_json(const MatchResult& r) {
  return {{"score", r.score},
          {"display_score", r.display_score()},
          {"stars", r.stars},
          {"ul", r.ul},
          {"ulv", r.ulv},
          {"npl", r.npl},
          {"np", r.np},
          {"m", r.m},
          {"elapsed", r.elapsed},
          {"ascent_valid", r.ascent_valid},
          {"descent_valid", r.descent_valid}};
}

MatchResult match_result_from_json(const json& doc) {
  MatchResult r;
  r.score = doc.at("score").get<double>();
  r.stars = doc.at("stars").get<int>();
  r.ul = doc.at("ul").get<int>();
  r.ulv = doc.at("ulv").get<int>();
  r.npl = doc.at("npl").get<double>();
  r.np = doc.value("np", std::uint64_t{0});
  r.m = doc.value("m", 1);
  r.elapsed = doc.value("elapsed", 0.0);
  r.ascent_valid = doc.value("ascent_valid", std::vector<bool>{});
  r.descent_valid = doc.value("descent_valid", std::vector<bool>{});
  return r;
}

double compute_npl(std::uint64_t np, int g) {
  if (g <= 0) throw ValidationError("g must be positive");
  const double ratio = static_cast<double>(np) / static_cast<double>(g);
  return std::min(std::max(ratio, 0.2), 0.8);
}

bool step_is_valid(Side side, const std::string& prev, const std::string& next,
                   const PlayGraph& graph, const KnowledgeBase& kb, std::uint64_t n_threshold,
                   ValidityMode mode) {
  const bool kb_ok = side == Side::hyper ? is_generalization(kb, prev, next, mode)
                                         : is_generalization(kb, next, prev, mode);
  if (kb_ok) return true;
  const Arc* arc = graph.find_arc(side, prev, next);
  return arc && arc_is_valid(*arc, n_threshold);
}

ValidatedLength validated_length(const Ladder& ladder, const PlayGraph& graph,
                                 const KnowledgeBase& kb, std::uint64_t n_threshold,
                                 ValidityMode mode, UlvMode ulv_mode) {
  if (ladder.prompt != graph.root()) {
    throw ValidationError("ladder prompt '" + ladder.prompt + "' does not match graph root '" +
                          graph.root() + "'");
  }
  ValidatedLength out;
  auto walk = [&](const std::vector<std::string>& rungs, Side side, std::vector<bool>& flags) {
    const std::string* prev = &ladder.prompt;
    bool chain_intact = true;
    for (const auto& rung : rungs) {
      bool ok = step_is_valid(side, *prev, rung, graph, kb, n_threshold, mode);
      if (ulv_mode == UlvMode::chain) {
        chain_intact = chain_intact && ok;
        ok = chain_intact;
      }
      flags.push_back(ok);
      if (ok) ++out.ulv;
      prev = &rung;
    }
  };
  walk(ladder.ascent, Side::hyper, out.ascent_valid);
  walk(ladder.descent, Side::hypo, out.descent_valid);
  return out;
}

double compute_score(double npl, int ul, int ulv, int m) {
  if (m < 1) throw ValidationError("m must be >= 1");
  if (ul < 1 || ulv < 0 || ulv > ul) throw ValidationError("need 0 <= ulv <= ul and ul >= 1");
  const double md = m;
  const double s = 100.0 * npl * std::min(ulv, m) / md + 100.0 * (1.0 - npl) * std::min(ul, m) / md;
  return std::clamp(s, 0.0, 100.0);
}

double apply_time_bonus(double score, double elapsed, double match_duration) {
  if (!(match_duration > 0.0)) throw ValidationError("match duration must be positive");
  if (!(elapsed >= 0.0 && elapsed <= match_duration)) {
    throw ValidationError("elapsed time outside the match window");
  }
  return std::min(score + 10.0 * (1.0 - elapsed / match_duration), 100.0);
}

int stars(double score) {
  if (!(score >= 0.0 && score <= 100.0)) throw ValidationError("score outside [0,100]");
  if (score >= 80.0) return 5;
  return 1 + static_cast<int>(score / 20.0);
}

MatchResult evaluate_ladder(const Ladder& ladder, const PlayGraph& graph, const KnowledgeBase& kb,
                            std::uint64_t prior_plays, double elapsed,
                            const EngineConfig& config) {
  const auto threshold = static_cast<std::uint64_t>(config.crowd_threshold);
  const ValidatedLength v =
      validated_length(ladder, graph, kb, threshold, config.validity, config.ulv_mode);

  std::uint64_t np = prior_plays;
  if (config.plays_source == PlaysSource::arc && ladder.length() > 1) {
    // Least-played arc of this ladder, excluding the play being scored.
    np = std::numeric_limits<std::uint64_t>::max();
    auto scan = [&](const std::vector<std::string>& rungs, Side side) {
      const std::string* prev = &ladder.prompt;
      for (const auto& rung : rungs) {
        const Arc* arc = graph.find_arc(side, *prev, rung);
        const std::uint64_t plays = arc && arc->play_count > 0 ? arc->play_count - 1 : 0;
        np = std::min(np, plays);
        prev = &rung;
      }
    };
    scan(ladder.ascent, Side::hyper);
    scan(ladder.descent, Side::hypo);
  }

  MatchResult r;
  r.ul = ladder.length();
  r.ulv = v.ulv;
  r.ascent_valid = v.ascent_valid;
  r.descent_valid = v.descent_valid;
  r.np = np;
  r.npl = compute_npl(np, config.plays_for_good_evaluation);
  r.m = std::max(graph.max_length(), v.ulv);
  r.elapsed = elapsed;
  const double base = compute_score(r.npl, r.ul, r.ulv, r.m);
  r.score = apply_time_bonus(base, elapsed, config.match_duration_s);
  r.stars = stars(r.score);
  return r;
}

}  // namespace wordladders
