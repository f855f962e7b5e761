#include "engine_options.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <stdexcept>

namespace wordladders::cli {

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw std::runtime_error("config key '" + key + "': '" + text + "' is not a number");
  }
  return value;
}

template <typename E>
E parse_choice(const std::string& key, const std::string& text, const std::map<std::string, E>& choices) {
  const auto it = choices.find(text);
  if (it == choices.end()) throw std::runtime_error("config key '" + key + "': bad value '" + text + "'");
  return it->second;
}

const std::map<std::string, ValidityMode> kValidity{{"direct", ValidityMode::direct},
                                                    {"transitive", ValidityMode::transitive}};
const std::map<std::string, UlvMode> kUlv{{"chain", UlvMode::chain}, {"count", UlvMode::count}};
const std::map<std::string, PlaysSource> kPlays{{"graph", PlaysSource::graph}, {"arc", PlaysSource::arc}};

using Setter = std::function<void(EngineConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"g", [](auto& c, auto& k, auto& v) { c.plays_for_good_evaluation = parse_number<int>(k, v); }},
      {"n", [](auto& c, auto& k, auto& v) { c.crowd_threshold = parse_number<int>(k, v); }},
      {"tau", [](auto& c, auto& k, auto& v) { c.bad_ladder_tau = parse_number<double>(k, v); }},
      {"advance_threshold", [](auto& c, auto& k, auto& v) { c.advance_threshold = parse_number<double>(k, v); }},
      {"depth_cap", [](auto& c, auto& k, auto& v) { c.depth_cap = parse_number<int>(k, v); }},
      {"levels", [](auto& c, auto& k, auto& v) { c.n_levels = parse_number<int>(k, v); }},
      {"words_per_level", [](auto& c, auto& k, auto& v) { c.words_per_level = parse_number<int>(k, v); }},
      {"match_duration", [](auto& c, auto& k, auto& v) { c.match_duration_s = parse_number<double>(k, v); }},
      {"specificity_target",
       [](auto& c, auto& k, auto& v) { c.specificity_target = parse_number<std::uint64_t>(k, v); }},
      {"validity", [](auto& c, auto& k, auto& v) { c.validity = parse_choice(k, v, kValidity); }},
      {"ulv_mode", [](auto& c, auto& k, auto& v) { c.ulv_mode = parse_choice(k, v, kUlv); }},
      {"plays_source", [](auto& c, auto& k, auto& v) { c.plays_source = parse_choice(k, v, kPlays); }},
  };
  return table;
}

std::string canonical_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) { return std::tolower(ch); });
  // Long-form aliases.
  if (key == "plays_for_good_evaluation") return "g";
  if (key == "crowd_threshold") return "n";
  if (key == "bad_ladder_tau") return "tau";
  return key;
}

}  // namespace

void apply_config_file(const std::filesystem::path& path, EngineConfig& config) {
  if (!std::filesystem::exists(path)) throw std::runtime_error("config file not found: " + path.string());
  for (const auto& item : CLI::ConfigTOML().from_file(path.string())) {
    // Section open/close markers carry no value.
    if (item.name == "++" || item.name == "--") continue;
    const std::string key = canonical_key(item.name);
    const auto it = setters().find(key);
    if (it == setters().end()) throw std::runtime_error("unknown config key '" + item.name + "'");
    if (item.inputs.size() != 1) throw std::runtime_error("config key '" + item.name + "' needs one value");
    it->second(config, item.name, item.inputs.front());
  }
}

void add_engine_options(CLI::App& app, EngineConfig& config) {
  app.add_option_function<std::string>(
         "--config", [&config](const std::string& path) { apply_config_file(path, config); },
         "Engine settings file (key = value)")
      ->check(CLI::ExistingFile);
  app.add_option("-g,--plays-for-good-evaluation", config.plays_for_good_evaluation,
                 "Plays before a graph's evaluation is fully trusted")
      ->check(CLI::PositiveNumber);
  app.add_option("-N,--crowd-threshold", config.crowd_threshold, "Plays that validate a non-KB arc")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--tau", config.bad_ladder_tau, "Bad-ladder valid-arc fraction cutoff")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--advance-threshold", config.advance_threshold, "Mean level score needed to advance");
  app.add_option("--depth-cap", config.depth_cap, "Max KB chain length pre-generated per side")
      ->check(CLI::PositiveNumber);
  app.add_option("--levels", config.n_levels, "Number of difficulty levels")->check(CLI::PositiveNumber);
  app.add_option("--words-per-level", config.words_per_level, "Prompts per level pass")
      ->check(CLI::PositiveNumber);
  app.add_option("--specificity-target", config.specificity_target, "Observations per word to aim for");
  app.add_option("--validity", config.validity, "KB arc test")
      ->transform(CLI::CheckedTransformer(kValidity, CLI::ignore_case));
  app.add_option("--ulv-mode", config.ulv_mode, "Validated length counting")
      ->transform(CLI::CheckedTransformer(kUlv, CLI::ignore_case));
  app.add_option("--plays-source", config.plays_source, "What np counts")
      ->transform(CLI::CheckedTransformer(kPlays, CLI::ignore_case));
}

}  // namespace wordladders::cli
