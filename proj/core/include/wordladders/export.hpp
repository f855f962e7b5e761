#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wordladders/sessions.hpp"
#include "wordladders/specificity.hpp"

namespace wordladders {

enum class Collection { users, matches, ladders, graphs, specificity };

std::string_view to_string(Collection collection);
std::optional<Collection> parse_collection(std::string_view text);

// Equality and numeric range test on one whitelisted field.
struct FieldPredicate {
  std::string field;
  std::optional<nlohmann::json> equals;
  std::optional<double> gt, gte, lt, lte;

  bool matches(const nlohmann::json& value) const;
};

struct ExportQuery {
  Collection collection = Collection::users;
  std::vector<FieldPredicate> filter;
  ExportFormat format = ExportFormat::json;
  bool json_lines = false;
};

// Column order of each collection's rows; also the full set of keys any
// exported row may carry.
const std::vector<std::string>& export_columns(Collection collection);
const std::vector<std::string>& filterable_fields(Collection collection);

// `filter` is a flat document: {"field": value} for equality or
// {"field": {"gte": 1, "lt": 5}} for ranges. Throws ValidationError for
// fields outside the whitelist or unknown operators.
std::vector<FieldPredicate> parse_filter(Collection collection, const nlohmann::json& filter);

// One flat JSON object per record, keys exactly export_columns().
std::vector<nlohmann::json> collection_rows(const SessionManager& sessions,
                                            Collection collection);

// Flattens a row to CSV cells: arrays joined with '|', other scalars as
// their JSON text (strings unquoted).
std::vector<std::string> flatten_row(Collection collection, const nlohmann::json& row);

struct ExportDocument {
  std::string content_type;
  std::string body;
  std::size_t record_count = 0;
};

ExportDocument run_export(const SessionManager& sessions, const ExportQuery& query);

}  // namespace wordladders
