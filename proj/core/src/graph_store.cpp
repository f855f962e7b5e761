#include "wordladders/graph_store.hpp"

namespace wordladders {

void GraphStore::set_knowledge_base(Language lang, std::shared_ptr<const KnowledgeBase> kb) {
  std::unique_lock lock(mutex_);
  kbs_[lang] = std::move(kb);
}

std::shared_ptr<const KnowledgeBase> GraphStore::knowledge_base(Language lang) const {
  std::shared_lock lock(mutex_);
  const auto it = kbs_.find(lang);
  return it == kbs_.end() ? nullptr : it->second;
}

void GraphStore::restore(PlayGraph graph) {
  auto slot = std::make_shared<Slot>();
  Key key{graph.language(), graph.root()};
  slot->graph = std::move(graph);
  std::unique_lock lock(mutex_);
  slots_[std::move(key)] = std::move(slot);
}

PlayGraph GraphStore::fresh_graph(Language lang, const std::string& prompt) const {
  const auto it = kbs_.find(lang);
  if (it == kbs_.end() || !it->second) return PlayGraph(prompt, lang);
  return init_graph(prompt, *it->second, depth_cap_);
}

std::shared_ptr<GraphStore::Slot> GraphStore::acquire(Language lang, const std::string& prompt) {
  Key key{lang, prompt};
  {
    std::shared_lock lock(mutex_);
    const auto it = slots_.find(key);
    if (it != slots_.end()) return it->second;
  }
  std::unique_lock lock(mutex_);
  auto& slot = slots_[key];
  if (!slot) {
    slot = std::make_shared<Slot>();
    slot->graph = fresh_graph(lang, prompt);
  }
  return slot;
}

std::optional<PlayGraph> GraphStore::snapshot(Language lang, const std::string& prompt) const {
  std::shared_ptr<Slot> slot;
  {
    std::shared_lock lock(mutex_);
    const auto it = slots_.find({lang, prompt});
    if (it != slots_.end()) {
      slot = it->second;
    } else {
      const auto kb = kbs_.find(lang);
      if (kb == kbs_.end() || !kb->second || !kb->second->contains(prompt)) return std::nullopt;
      return fresh_graph(lang, prompt);
    }
  }
  std::lock_guard lock(slot->mutex);
  return slot->graph;
}

std::vector<PlayGraph> GraphStore::snapshot_all() const {
  std::vector<std::shared_ptr<Slot>> slots;
  {
    std::shared_lock lock(mutex_);
    for (const auto& [key, slot] : slots_) slots.push_back(slot);
  }
  std::vector<PlayGraph> out;
  out.reserve(slots.size());
  for (const auto& slot : slots) {
    std::lock_guard lock(slot->mutex);
    out.push_back(slot->graph);
  }
  return out;
}

}  // namespace wordladders
