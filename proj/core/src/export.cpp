#include "wordladders/export.hpp"

#include <algorithm>
#include <map>

#include "wordladders/csv.hpp"
#include "wordladders/error.hpp"

namespace wordladders {

using nlohmann::json;

namespace {

constexpr std::string_view kCollections[] = {"users", "matches", "ladders", "graphs",
                                             "specificity"};

// Keys no exported row may ever carry.
constexpr std::string_view kPiiKeys[] = {"email", "phone", "ip", "ip_address", "geolocation",
                                         "location", "latitude", "longitude", "address"};

const std::map<Collection, std::vector<std::string>>& column_table() {
  static const std::map<Collection, std::vector<std::string>> kColumns = {
      {Collection::users,
       {"nickname", "age", "education", "profession", "mother_tongue", "reading_habits",
        "language_pref"}},
      {Collection::matches,
       {"match_id", "mode", "participants", "prompt", "language", "started_at", "duration",
        "state", "winner", "team_score"}},
      {Collection::ladders,
       {"ladder_id", "match_id", "nickname", "mode", "language", "prompt", "ascent", "descent",
        "elapsed", "submitted_at", "ul", "ulv", "np", "npl", "m", "score", "display_score",
        "stars", "ascent_valid", "descent_valid"}},
      {Collection::graphs, {"language", "root", "side", "from", "to", "play_count", "in_kb"}},
      {Collection::specificity, {"lemma", "language", "mean", "sd", "n", "target_reached"}},
  };
  return kColumns;
}

const std::map<Collection, std::vector<std::string>>& filter_table() {
  static const std::map<Collection, std::vector<std::string>> kFilterable = {
      {Collection::users,
       {"nickname", "age", "education", "profession", "mother_tongue", "reading_habits",
        "language_pref"}},
      {Collection::matches,
       {"match_id", "mode", "prompt", "language", "started_at", "duration", "state", "winner"}},
      {Collection::ladders,
       {"ladder_id", "match_id", "nickname", "mode", "language", "prompt", "elapsed",
        "submitted_at", "ul", "ulv", "np", "npl", "m", "score", "display_score", "stars"}},
      {Collection::graphs, {"language", "root", "side", "from", "to", "play_count", "in_kb"}},
      {Collection::specificity, {"lemma", "language", "mean", "sd", "n", "target_reached"}},
  };
  return kFilterable;
}

std::optional<double> as_number(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      std::size_t used = 0;
      const double d = std::stod(s, &used);
      if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

std::string cell_text(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Projects a document onto the collection's columns, so nothing outside
// the whitelist can leave the service.
json project(Collection collection, const json& doc) {
  json row = json::object();
  for (const auto& column : export_columns(collection)) {
    row[column] = doc.contains(column) ? doc.at(column) : json(nullptr);
  }
  return row;
}

void check_row(const json& row) {
  for (const auto& [key, value] : row.items()) {
    for (auto pii : kPiiKeys) {
      if (key == pii) throw Error("export row carries forbidden field '" + key + "'");
    }
  }
}

std::vector<json> specificity_rows(const SessionManager& sessions) {
  std::vector<SpecificityObservation> observations;
  std::map<std::pair<Language, std::string>, std::optional<PlayGraph>> graphs;
  for (const auto& record : sessions.ladder_records()) {
    Ladder ladder;
    try {
      ladder = ladder_from_json(record);
    } catch (const ValidationError&) {
      continue;
    }
    if (!sessions.serves(ladder.language)) continue;
    const auto& res = sessions.resources(ladder.language);
    auto [it, inserted] = graphs.try_emplace({ladder.language, ladder.prompt});
    if (inserted) it->second = sessions.graphs().snapshot(ladder.language, ladder.prompt);
    const PlayGraph* graph = it->second ? &*it->second : nullptr;
    const auto report = clean_ladder(record.value("ladder_id", ""), ladder, res.vocabulary,
                                     res.blocklist, *res.kb, graph, sessions.config());
    if (report.bad_ladder) continue;
    for (auto& s : ladder_specificity(report.cleaned)) {
      observations.push_back({std::move(s.lemma), ladder.language, s.score});
    }
  }
  std::vector<json> rows;
  for (const auto& r : aggregate(observations, sessions.config().specificity_target).records) {
    rows.push_back({{"lemma", r.lemma},
                    {"language", to_string(r.language)},
                    {"mean", r.mean_specificity},
                    {"sd", r.sd},
                    {"n", r.n_observations},
                    {"target_reached", r.target_reached}});
  }
  return rows;
}

}  // namespace

std::string_view to_string(Collection collection) {
  return kCollections[static_cast<int>(collection)];
}

std::optional<Collection> parse_collection(std::string_view text) {
  for (std::size_t i = 0; i < std::size(kCollections); ++i) {
    if (kCollections[i] == text) return static_cast<Collection>(i);
  }
  return std::nullopt;
}

const std::vector<std::string>& export_columns(Collection collection) {
  return column_table().at(collection);
}

const std::vector<std::string>& filterable_fields(Collection collection) {
  return filter_table().at(collection);
}

bool FieldPredicate::matches(const json& value) const {
  if (equals) {
    if (equals->is_string() && value.is_string()) {
      if (equals->get<std::string>() != value.get<std::string>()) return false;
    } else if (equals->is_boolean() || value.is_boolean()) {
      if (cell_text(*equals) != cell_text(value)) return false;
    } else {
      const auto a = as_number(*equals);
      const auto b = as_number(value);
      if (a && b) {
        if (*a != *b) return false;
      } else if (cell_text(*equals) != cell_text(value)) {
        return false;
      }
    }
  }
  if (gt || gte || lt || lte) {
    const auto v = as_number(value);
    if (!v) return false;
    if (gt && !(*v > *gt)) return false;
    if (gte && !(*v >= *gte)) return false;
    if (lt && !(*v < *lt)) return false;
    if (lte && !(*v <= *lte)) return false;
  }
  return true;
}

std::vector<FieldPredicate> parse_filter(Collection collection, const json& filter) {
  std::vector<FieldPredicate> out;
  if (filter.is_null()) return out;
  if (!filter.is_object()) throw ValidationError("filter must be a JSON object");
  const auto& allowed = filterable_fields(collection);
  for (const auto& [field, spec] : filter.items()) {
    if (std::find(allowed.begin(), allowed.end(), field) == allowed.end()) {
      throw ValidationError("field '" + field + "' is not filterable on " +
                            std::string(to_string(collection)));
    }
    FieldPredicate p;
    p.field = field;
    if (!spec.is_object()) {
      if (spec.is_array() || spec.is_null()) throw ValidationError("bad filter value for " + field);
      p.equals = spec;
    } else {
      for (const auto& [op_raw, bound] : spec.items()) {
        const std::string op = !op_raw.empty() && op_raw[0] == '$' ? op_raw.substr(1) : op_raw;
        if (op == "eq") {
          p.equals = bound;
          continue;
        }
        if (!bound.is_number()) throw ValidationError("range bound for " + field + " must be numeric");
        const double b = bound.get<double>();
        if (op == "gt") p.gt = b;
        else if (op == "gte") p.gte = b;
        else if (op == "lt") p.lt = b;
        else if (op == "lte") p.lte = b;
        else throw ValidationError("unknown filter operator '" + op_raw + "'");
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<json> collection_rows(const SessionManager& sessions, Collection collection) {
  std::vector<json> docs;
  switch (collection) {
    case Collection::users:
      for (const auto& u : sessions.users()) docs.push_back(to_json(u));
      break;
    case Collection::matches:
      for (const auto& m : sessions.matches()) docs.push_back(to_json(m));
      break;
    case Collection::ladders:
      docs = sessions.ladder_records();
      break;
    case Collection::graphs:
      for (const auto& g : sessions.graphs().snapshot_all()) {
        for (Side side : {Side::hyper, Side::hypo}) {
          for (const auto& a : g.arcs(side)) {
            docs.push_back({{"language", to_string(g.language())},
                            {"root", g.root()},
                            {"side", to_string(side)},
                            {"from", a.from},
                            {"to", a.to},
                            {"play_count", a.play_count},
                            {"in_kb", a.in_kb}});
          }
        }
      }
      break;
    case Collection::specificity:
      docs = specificity_rows(sessions);
      break;
  }
  std::vector<json> rows;
  rows.reserve(docs.size());
  for (const auto& doc : docs) rows.push_back(project(collection, doc));
  return rows;
}

std::vector<std::string> flatten_row(Collection collection, const json& row) {
  std::vector<std::string> cells;
  for (const auto& column : export_columns(collection)) {
    const json& v = row.at(column);
    if (v.is_array()) {
      std::string joined;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) joined.push_back('|');
        joined += cell_text(v[i]);
      }
      cells.push_back(std::move(joined));
    } else {
      cells.push_back(cell_text(v));
    }
  }
  return cells;
}

ExportDocument run_export(const SessionManager& sessions, const ExportQuery& query) {
  std::vector<json> rows = collection_rows(sessions, query.collection);
  std::erase_if(rows, [&](const json& row) {
    return !std::all_of(query.filter.begin(), query.filter.end(), [&](const FieldPredicate& p) {
      return row.contains(p.field) && p.matches(row.at(p.field));
    });
  });
  for (const auto& row : rows) check_row(row);

  ExportDocument out;
  out.record_count = rows.size();
  if (query.format == ExportFormat::csv) {
    out.content_type = "text/csv; charset=utf-8";
    out.body = csv::format_row(export_columns(query.collection));
    for (const auto& row : rows) out.body += csv::format_row(flatten_row(query.collection, row));
  } else if (query.json_lines) {
    out.content_type = "application/x-ndjson";
    for (const auto& row : rows) out.body += row.dump() + "\n";
  } else {
    out.content_type = "application/json";
    out.body = json(rows).dump();
  }
  return out;
}

}  // namespace wordladders
