#include "wordladders/store.hpp"

#include <fstream>

#include "wordladders/error.hpp"

namespace wordladders {

namespace fs = std::filesystem;
using nlohmann::json;

void MemoryStore::append(const std::string& collection, const json& doc) {
  std::lock_guard lock(mutex_);
  collections_[collection].push_back(doc);
}

std::vector<json> MemoryStore::load(const std::string& collection) const {
  std::lock_guard lock(mutex_);
  const auto it = collections_.find(collection);
  return it == collections_.end() ? std::vector<json>{} : it->second;
}

void MemoryStore::put_graph(Language lang, const std::string& prompt, const json& doc) {
  std::lock_guard lock(mutex_);
  graphs_[{lang, prompt}] = doc;
}

std::vector<json> MemoryStore::load_graphs() const {
  std::lock_guard lock(mutex_);
  std::vector<json> out;
  for (const auto& [key, doc] : graphs_) out.push_back(doc);
  return out;
}

namespace {

// Prompts are arbitrary UTF-8; hex keeps file names portable.
std::string hex_name(const std::string& text) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (unsigned char c : text) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 0xF]);
  }
  return out;
}

}  // namespace

DiskStore::DiskStore(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_ / "graphs");
}

std::mutex& DiskStore::collection_mutex(const std::string& collection) const {
  std::lock_guard lock(registry_mutex_);
  auto& m = collection_mutexes_[collection];
  if (!m) m = std::make_unique<std::mutex>();
  return *m;
}

void DiskStore::append(const std::string& collection, const json& doc) {
  const std::string line = doc.dump() + "\n";
  std::lock_guard lock(collection_mutex(collection));
  std::ofstream out(dir_ / (collection + ".jsonl"), std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot append to collection " + collection);
  out << line;
  out.flush();
  if (!out) throw Error("write failed for collection " + collection);
}

std::vector<json> DiskStore::load(const std::string& collection) const {
  std::lock_guard lock(collection_mutex(collection));
  std::vector<json> docs;
  std::ifstream in(dir_ / (collection + ".jsonl"), std::ios::binary);
  if (!in) return docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      docs.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError(collection + ".jsonl: " + e.what(), line_no);
    }
  }
  return docs;
}

void DiskStore::put_graph(Language lang, const std::string& prompt, const json& doc) {
  const fs::path dir = dir_ / "graphs" / std::string(to_string(lang));
  const fs::path target = dir / (hex_name(prompt) + ".json");
  const fs::path tmp = dir / (hex_name(prompt) + ".json.tmp");
  std::lock_guard lock(graph_mutex_);
  fs::create_directories(dir);
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    out << doc.dump();
    if (!out) throw Error("cannot write graph snapshot " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::vector<json> DiskStore::load_graphs() const {
  std::lock_guard lock(graph_mutex_);
  std::vector<json> docs;
  const fs::path root = dir_ / "graphs";
  if (!fs::exists(root)) return docs;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    try {
      docs.push_back(json::parse(in));
    } catch (const json::exception& e) {
      throw ParseError(entry.path().string() + ": " + e.what());
    }
  }
  return docs;
}

}  // namespace wordladders
