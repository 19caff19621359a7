#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kbqa/vocabulary.hpp"

namespace kbqa {

/// Prefix tree over tokenized schema names; every root-to-terminal path
/// spells one item.
class SchemaTrie {
 public:
  using NodeIndex = std::uint32_t;
  static constexpr NodeIndex kRoot = 0;

  SchemaTrie();

  /// Throws TokenizeError naming the first item the vocabulary cannot encode.
  static SchemaTrie build(const std::vector<std::string>& items, const Vocabulary& vocab);

  std::optional<NodeIndex> child(NodeIndex node, TokenId token) const;
  /// Sorted by token id.
  std::span<const std::pair<TokenId, NodeIndex>> children(NodeIndex node) const;
  bool is_terminal(NodeIndex node) const { return nodes_.at(node).terminal; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// Sorted, unique.
  const std::vector<std::string>& items() const noexcept { return items_; }
  bool contains(std::span<const TokenId> tokens) const;

  /// One item per line.
  void dump(std::ostream& out) const;
  static SchemaTrie load(std::istream& in, const Vocabulary& vocab);

 private:
  struct Node {
    std::vector<std::pair<TokenId, NodeIndex>> children;
    bool terminal = false;
  };
  std::vector<Node> nodes_;
  std::vector<std::string> items_;
};

}  // namespace kbqa
