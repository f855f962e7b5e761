#include "wordladders/specificity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "wordladders/csv.hpp"
#include "wordladders/error.hpp"

namespace wordladders {
namespace {

const std::vector<std::string> kColumns = {"lemma", "language", "mean", "sd", "n",
                                           "target_reached"};

std::string shortest(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

template <typename T>
T parse_field(const std::string& text, std::string_view column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("bad value for '" + std::string(column) + "': " + text);
  }
  return value;
}

}  // namespace

std::vector<SpecificityScore> ladder_specificity(const Ladder& ladder) {
  std::vector<std::string> order(ladder.ascent.rbegin(), ladder.ascent.rend());
  order.push_back(ladder.prompt);
  order.insert(order.end(), ladder.descent.begin(), ladder.descent.end());

  const double length = static_cast<double>(order.size());
  std::vector<SpecificityScore> out;
  out.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.push_back({std::move(order[i]), static_cast<double>(i + 1) / length});
  }
  return out;
}

Aggregation aggregate(const std::vector<SpecificityObservation>& observations,
                      std::uint64_t target) {
  struct Running {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
  };
  std::map<std::pair<std::string, Language>, Running> groups;
  Aggregation out;
  for (const auto& obs : observations) {
    if (!(obs.score > 0.0 && obs.score <= 1.0)) {
      out.warnings.push_back("specificity " + shortest(obs.score) + " for '" + obs.lemma +
                             "' outside (0,1]; observation rejected");
      continue;
    }
    // Welford's update.
    auto& g = groups[{obs.lemma, obs.language}];
    ++g.n;
    const double delta = obs.score - g.mean;
    g.mean += delta / static_cast<double>(g.n);
    g.m2 += delta * (obs.score - g.mean);
  }
  for (const auto& [key, g] : groups) {
    SpecificityRecord r;
    r.lemma = key.first;
    r.language = key.second;
    r.mean_specificity = g.mean;
    r.sd = g.n > 1 ? std::sqrt(g.m2 / static_cast<double>(g.n - 1)) : 0.0;
    r.n_observations = g.n;
    r.target_reached = g.n >= target;
    out.records.push_back(std::move(r));
  }
  return out;
}

std::string export_specificity(std::vector<SpecificityRecord> records, ExportFormat format) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.lemma, a.language) < std::tie(b.lemma, b.language);
  });
  if (format == ExportFormat::csv) {
    std::string out = csv::format_row(kColumns);
    for (const auto& r : records) {
      out += csv::format_row({r.lemma, std::string(to_string(r.language)),
                              shortest(r.mean_specificity), shortest(r.sd),
                              std::to_string(r.n_observations),
                              r.target_reached ? "true" : "false"});
    }
    return out;
  }
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : records) {
    doc.push_back({{"lemma", r.lemma},
                   {"language", to_string(r.language)},
                   {"mean", r.mean_specificity},
                   {"sd", r.sd},
                   {"n", r.n_observations},
                   {"target_reached", r.target_reached}});
  }
  return doc.dump();
}

std::vector<SpecificityRecord> parse_specificity(std::string_view document, ExportFormat format) {
  std::vector<SpecificityRecord> out;
  auto language = [](const std::string& text) {
    const auto lang = parse_language(text);
    if (!lang) throw ParseError("unknown language '" + text + "'");
    return *lang;
  };
  if (format == ExportFormat::csv) {
    const auto rows = csv::parse(document);
    if (rows.empty() || rows.front() != kColumns) throw ParseError("missing specificity header", 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (row.size() != kColumns.size()) throw ParseError("wrong column count", i + 1);
      if (row[5] != "true" && row[5] != "false") throw ParseError("bad target_reached", i + 1);
      out.push_back({row[0], language(row[1]), parse_field<double>(row[2], "mean"),
                     parse_field<double>(row[3], "sd"), parse_field<std::uint64_t>(row[4], "n"),
                     row[5] == "true"});
    }
    return out;
  }
  try {
    for (const auto& item : nlohmann::json::parse(document)) {
      out.push_back({item.at("lemma").get<std::string>(),
                     language(item.at("language").get<std::string>()),
                     item.at("mean").get<double>(), item.at("sd").get<double>(),
                     item.at("n").get<std::uint64_t>(), item.at("target_reached").get<bool>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed specificity JSON: ") + e.what());
  }
  return out;
}

}  // namespace wordladders
