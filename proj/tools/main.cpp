#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <map>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "engine_options.hpp"
#include "wordladders/api_service.hpp"
#include "wordladders/error.hpp"
#include "wordladders/export.hpp"
#include "wordladders/sessions.hpp"

namespace wl = wordladders;

namespace {

// One --language/--norms/--taxonomy[/--blocklist] group per served language.
struct LanguageArgs {
  std::vector<std::string> languages;
  std::vector<std::string> norms;
  std::vector<std::string> taxonomies;
  std::vector<std::string> blocklists;

  void add_to(CLI::App& app, bool required = true) {
    auto* lang = app.add_option("--language", languages, "EN or IT, once per language");
    auto* n = app.add_option("--norms", norms, "Norms TSV, one per --language")->check(CLI::ExistingFile);
    auto* t = app.add_option("--taxonomy", taxonomies, "Taxonomy TSV, one per --language")
                  ->check(CLI::ExistingFile);
    app.add_option("--blocklist", blocklists, "Blocklist file, one per --language if given")
        ->check(CLI::ExistingFile);
    if (required) {
      lang->required();
      n->required();
      t->required();
    }
  }
};

void warn(const std::string& file, const std::vector<wl::LoadWarning>& warnings) {
  for (const auto& w : warnings) std::cerr << file << ":" << w.line << ": " << w.message << "\n";
}

std::vector<std::pair<wl::Language, wl::LanguageResources>> load_languages(const LanguageArgs& args,
                                                                           const wl::EngineConfig& config) {
  const auto n = args.languages.size();
  if (args.norms.size() != n || args.taxonomies.size() != n ||
      (!args.blocklists.empty() && args.blocklists.size() != n)) {
    throw wl::ValidationError("give one --norms and --taxonomy (and --blocklist, if any) per --language");
  }
  std::vector<std::pair<wl::Language, wl::LanguageResources>> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto lang = wl::parse_language(args.languages[i]);
    if (!lang) throw wl::ValidationError("unknown language '" + args.languages[i] + "'");
    auto norms = wl::load_norms(args.norms[i], *lang);
    warn(args.norms[i], norms.warnings);
    auto taxonomy = wl::load_taxonomy(args.taxonomies[i], *lang);
    warn(args.taxonomies[i], taxonomy.warnings);
    std::unordered_set<std::string> blocklist;
    if (!args.blocklists.empty()) blocklist = wl::load_blocklist(args.blocklists[i]);
    out.emplace_back(*lang, wl::make_language_resources(norms.entries, std::move(taxonomy.kb),
                                                        std::move(blocklist), config.n_levels));
    const auto& r = out.back().second;
    std::cerr << wl::to_string(*lang) << ": " << r.kb->edge_count() << " taxonomy edges, "
              << r.levels.assignment.size() << " prompts in " << r.levels.level_count() << " levels\n";
  }
  return out;
}

std::atomic<wl::ApiService*> g_running{nullptr};

extern "C" void on_signal(int) {
  if (auto* api = g_running.load()) api->stop();
}

int serve(const wl::EngineConfig& config, const LanguageArgs& langs, const std::string& data_dir,
          const std::string& host, int port) {
  auto store = std::make_shared<wl::DiskStore>(data_dir);
  wl::SessionManager sessions(config, store);
  for (auto& [lang, res] : load_languages(langs, config)) sessions.add_language(lang, std::move(res));
  sessions.restore();

  const char* tokens_env = std::getenv("WL_RESEARCH_TOKENS");
  auto tokens = wl::parse_research_tokens(tokens_env ? tokens_env : "");
  if (tokens.empty()) std::cerr << "WL_RESEARCH_TOKENS is empty; export endpoints will refuse every request\n";

  wl::ApiService api(sessions, std::move(tokens));
  api.set_request_log([](const std::string& method, const std::string& path, int status) {
    std::cerr << method << " " << path << " " << status << "\n";
  });
  const int bound = api.bind(host, port);
  if (bound < 0) {
    std::cerr << "cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  std::cerr << "listening on " << host << ":" << bound << ", data in " << data_dir << "\n";
  g_running = &api;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const bool ok = api.listen();
  g_running = nullptr;
  return ok ? 0 : 1;
}

std::ostream& output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

int clean(const wl::EngineConfig& config, const LanguageArgs& langs, const std::string& input,
          const std::string& data_dir, const std::string& out_path) {
  std::map<wl::Language, wl::LanguageResources> resources;
  for (auto& [lang, res] : load_languages(langs, config)) resources.emplace(lang, std::move(res));

  std::map<std::pair<wl::Language, std::string>, wl::PlayGraph> graphs;
  if (!data_dir.empty()) {
    for (const auto& doc : wl::DiskStore(data_dir).load_graphs()) {
      auto g = wl::deserialize_graph(doc);
      graphs[{g.language(), g.root()}] = std::move(g);
    }
  }

  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot read " + input);
  std::ofstream file;
  std::ostream& out = output(out_path, file);
  std::string line;
  std::size_t line_no = 0, written = 0, skipped = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto doc = nlohmann::json::parse(line);
      auto ladder = wl::ladder_from_json(doc);
      wl::normalize_and_validate(ladder);
      const auto it = resources.find(ladder.language);
      if (it == resources.end()) throw wl::ValidationError("no resources loaded for this language");
      const auto g = graphs.find({ladder.language, ladder.prompt});
      const std::string id = doc.value("ladder_id", std::to_string(line_no));
      const auto report = wl::clean_ladder(id, ladder, it->second.vocabulary, it->second.blocklist,
                                           *it->second.kb, g == graphs.end() ? nullptr : &g->second,
                                           config);
      out << wl::to_json(report).dump() << "\n";
      ++written;
    } catch (const std::exception& e) {
      std::cerr << input << ":" << line_no << ": skipped: " << e.what() << "\n";
      ++skipped;
    }
  }
  std::cerr << written << " reports written, " << skipped << " lines skipped\n";
  return 0;
}

int levels(const wl::EngineConfig& config, const LanguageArgs& langs, const std::string& out_path) {
  std::ofstream file;
  std::ostream& out = output(out_path, file);
  for (const auto& [lang, res] : load_languages(langs, config)) wl::write_level_table(out, res.levels);
  return 0;
}

int specificity(const wl::EngineConfig& config, const LanguageArgs& langs, const std::string& data_dir,
                const std::string& format, const std::string& out_path) {
  wl::SessionManager sessions(config, std::make_shared<wl::DiskStore>(data_dir));
  for (auto& [lang, res] : load_languages(langs, config)) sessions.add_language(lang, std::move(res));
  sessions.restore();
  wl::ExportQuery query;
  query.collection = wl::Collection::specificity;
  query.format = format == "csv" ? wl::ExportFormat::csv : wl::ExportFormat::json;
  const auto doc = wl::run_export(sessions, query);
  std::ofstream file;
  output(out_path, file) << doc.body;
  std::cerr << doc.record_count << " words\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word ladder game engine and research service"};
  app.require_subcommand(1);
  wl::EngineConfig config;
  LanguageArgs langs;

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  wl::cli::add_engine_options(*serve_cmd, config);
  langs.add_to(*serve_cmd);
  std::string data_dir = "data";
  std::string host = "127.0.0.1";
  int port = 8080;
  serve_cmd->add_option("--data-dir", data_dir, "Directory for collections and graph snapshots");
  serve_cmd->add_option("--host", host, "Address to listen on");
  serve_cmd->add_option("--port", port, "TCP port (0 picks a free one)")->envname("WL_PORT");

  auto* clean_cmd = app.add_subcommand("clean", "Clean a JSON-lines ladder dump");
  wl::cli::add_engine_options(*clean_cmd, config);
  langs.add_to(*clean_cmd);
  std::string input, out_path, graphs_dir;
  clean_cmd->add_option("input", input, "Ladders, one JSON object per line")->required()->check(CLI::ExistingFile);
  clean_cmd->add_option("-o,--output", out_path, "Report file (default stdout)");
  clean_cmd->add_option("--data-dir", graphs_dir, "Service data directory to read play graphs from");

  auto* levels_cmd = app.add_subcommand("levels", "Print the level table as lemma<TAB>level");
  wl::cli::add_engine_options(*levels_cmd, config);
  langs.add_to(*levels_cmd);
  levels_cmd->add_option("-o,--output", out_path, "Output file (default stdout)");

  auto* spec_cmd = app.add_subcommand("specificity", "Aggregate word specificity from stored ladders");
  wl::cli::add_engine_options(*spec_cmd, config);
  langs.add_to(*spec_cmd);
  std::string format = "csv";
  spec_cmd->add_option("--data-dir", data_dir, "Service data directory")->required()->check(CLI::ExistingDirectory);
  spec_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  spec_cmd->add_option("-o,--output", out_path, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) return serve(config, langs, data_dir, host, port);
    if (*clean_cmd) return clean(config, langs, input, graphs_dir, out_path);
    if (*levels_cmd) return levels(config, langs, out_path);
    if (*spec_cmd) return specificity(config, langs, data_dir, format, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
