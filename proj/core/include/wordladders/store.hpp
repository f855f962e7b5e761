#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wordladders/text.hpp"

namespace wordladders {

// Append-only document collections plus one snapshot slot per play graph.
// Appends to a collection are atomic with respect to each other.
class DocumentStore {
 public:
  virtual ~DocumentStore() = default;

  virtual void append(const std::string& collection, const nlohmann::json& doc) = 0;
  virtual std::vector<nlohmann::json> load(const std::string& collection) const = 0;

  virtual void put_graph(Language lang, const std::string& prompt,
                         const nlohmann::json& doc) = 0;
  virtual std::vector<nlohmann::json> load_graphs() const = 0;
};

class MemoryStore final : public DocumentStore {
 public:
  void append(const std::string& collection, const nlohmann::json& doc) override;
  std::vector<nlohmann::json> load(const std::string& collection) const override;
  void put_graph(Language lang, const std::string& prompt, const nlohmann::json& doc) override;
  std::vector<nlohmann::json> load_graphs() const override;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::vector<nlohmann::json>> collections_;
  std::map<std::pair<Language, std::string>, nlohmann::json> graphs_;
};

// <dir>/<collection>.jsonl, one document per line, and
// <dir>/graphs/<LANG>/<hex(prompt)>.json replaced atomically via rename.
class DiskStore final : public DocumentStore {
 public:
  explicit DiskStore(std::filesystem::path dir);

  void append(const std::string& collection, const nlohmann::json& doc) override;
  std::vector<nlohmann::json> load(const std::string& collection) const override;
  void put_graph(Language lang, const std::string& prompt, const nlohmann::json& doc) override;
  std::vector<nlohmann::json> load_graphs() const override;

  const std::filesystem::path& directory() const noexcept { return dir_; }

 private:
  std::mutex& collection_mutex(const std::string& collection) const;

  std::filesystem::path dir_;
  mutable std::mutex registry_mutex_;
  mutable std::map<std::string, std::unique_ptr<std::mutex>> collection_mutexes_;
  mutable std::mutex graph_mutex_;
};

}  // namespace wordladders
