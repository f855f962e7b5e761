#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "wordladders/ladder_graph.hpp"
#include "wordladders/lexicon.hpp"

namespace wordladders {

// Holds one PlayGraph per (language, prompt) with a mutex per graph: writers
// on the same prompt are serialized, different prompts proceed in parallel,
// and readers get a consistent copy.
class GraphStore {
 public:
  using Key = std::pair<Language, std::string>;
  using Listener = std::function<void(const PlayGraph&)>;

  explicit GraphStore(int depth_cap = 10) : depth_cap_(depth_cap) {}

  void set_knowledge_base(Language lang, std::shared_ptr<const KnowledgeBase> kb);
  std::shared_ptr<const KnowledgeBase> knowledge_base(Language lang) const;

  // Called with the new graph state after every update, still under the
  // graph's lock, so snapshots reach storage in write order.
  void on_update(Listener listener) { listener_ = std::move(listener); }

  // Inserts a previously persisted graph, replacing any in memory.
  void restore(PlayGraph graph);

  // Runs `mutate` under the graph's lock, creating the graph from the KB on
  // first use. Returns whatever `mutate` returns.
  template <typename Fn>
  auto update(Language lang, const std::string& prompt, Fn&& mutate) {
    auto slot = acquire(lang, prompt);
    std::lock_guard lock(slot->mutex);
    if constexpr (std::is_void_v<decltype(mutate(slot->graph))>) {
      mutate(slot->graph);
      notify(slot->graph);
    } else {
      auto result = mutate(slot->graph);
      notify(slot->graph);
      return result;
    }
  }

  // Copy of the stored graph. A prompt that was never played but is known
  // to the KB yields its pre-generated graph; otherwise nullopt.
  std::optional<PlayGraph> snapshot(Language lang, const std::string& prompt) const;

  std::vector<PlayGraph> snapshot_all() const;

 private:
  struct Slot {
    std::mutex mutex;
    PlayGraph graph;
  };

  std::shared_ptr<Slot> acquire(Language lang, const std::string& prompt);
  PlayGraph fresh_graph(Language lang, const std::string& prompt) const;
  void notify(const PlayGraph& graph) const {
    if (listener_) listener_(graph);
  }

  int depth_cap_;
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<Slot>> slots_;
  std::map<Language, std::shared_ptr<const KnowledgeBase>> kbs_;
  Listener listener_;
};

}  // namespace wordladders
