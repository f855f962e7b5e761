#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wordladders/ladder_graph.hpp"
#include "wordladders/lexicon.hpp"

namespace wordladders {

struct SpecificityScore {
  std::string lemma;
  double score = 0.0;
};

// Scores every word of a ladder by its 1-based position counted from the
// generic end, divided by the ladder length. Returned generic -> specific.
std::vector<SpecificityScore> ladder_specificity(const Ladder& ladder);

struct SpecificityObservation {
  std::string lemma;
  Language language = Language::EN;
  double score = 0.0;
};

struct SpecificityRecord {
  std::string lemma;
  Language language = Language::EN;
  double mean_specificity = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single observation
  std::uint64_t n_observations = 0;
  bool target_reached = false;

  friend bool operator==(const SpecificityRecord&, const SpecificityRecord&) = default;
};

struct Aggregation {
  std::vector<SpecificityRecord> records;  // sorted by (lemma, language)
  std::vector<std::string> warnings;
};

Aggregation aggregate(const std::vector<SpecificityObservation>& observations,
                      std::uint64_t target = 100);

enum class ExportFormat { csv, json };

std::string export_specificity(std::vector<SpecificityRecord> records, ExportFormat format);
std::vector<SpecificityRecord> parse_specificity(std::string_view document, ExportFormat format);

}  // namespace wordladders
