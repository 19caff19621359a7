#include "kbqa/trie.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "kbqa/text.hpp"

namespace kbqa {

SchemaTrie::SchemaTrie() : nodes_(1) {}

SchemaTrie SchemaTrie::build(const std::vector<std::string>& items, const Vocabulary& vocab) {
  SchemaTrie trie;
  trie.items_ = items;
  std::sort(trie.items_.begin(), trie.items_.end());
  trie.items_.erase(std::unique(trie.items_.begin(), trie.items_.end()), trie.items_.end());
  for (const auto& item : trie.items_) {
    NodeIndex node = kRoot;
    for (TokenId t : vocab.encode_schema_name(item)) {
      auto& kids = trie.nodes_[node].children;
      auto it = std::lower_bound(kids.begin(), kids.end(), t,
                                 [](const auto& edge, TokenId id) { return edge.first < id; });
      if (it != kids.end() && it->first == t) {
        node = it->second;
        continue;
      }
      auto next = static_cast<NodeIndex>(trie.nodes_.size());
      kids.insert(it, {t, next});
      trie.nodes_.emplace_back();
      node = next;
    }
    trie.nodes_[node].terminal = true;
  }
  return trie;
}

std::optional<SchemaTrie::NodeIndex> SchemaTrie::child(NodeIndex node, TokenId token) const {
  const auto& kids = nodes_.at(node).children;
  auto it = std::lower_bound(kids.begin(), kids.end(), token,
                             [](const auto& edge, TokenId id) { return edge.first < id; });
  if (it == kids.end() || it->first != token) return std::nullopt;
  return it->second;
}

std::span<const std::pair<TokenId, SchemaTrie::NodeIndex>> SchemaTrie::children(NodeIndex node) const {
  return nodes_.at(node).children;
}

bool SchemaTrie::contains(std::span<const TokenId> tokens) const {
  NodeIndex node = kRoot;
  for (TokenId t : tokens) {
    auto next = child(node, t);
    if (!next) return false;
    node = *next;
  }
  return nodes_[node].terminal;
}

void SchemaTrie::dump(std::ostream& out) const {
  for (const auto& item : items_) out << item << '\n';
}

SchemaTrie SchemaTrie::load(std::istream& in, const Vocabulary& vocab) {
  std::vector<std::string> items;
  std::string line;
  while (std::getline(in, line)) {
    auto item = trim(line);
    if (!item.empty()) items.emplace_back(item);
  }
  return build(items, vocab);
}

}  // namespace kbqa
