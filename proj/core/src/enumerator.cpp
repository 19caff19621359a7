#include "kbqa/enumerator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace kbqa {
namespace {

struct Candidate {
  LogicalForm form;
  std::vector<NodeId> denotation;
  std::size_t relations;
};

LogicalForm anchor_form(const Term& term) {
  if (const auto* lit = std::get_if<LiteralValue>(&term)) return LogicalForm::literal(*lit);
  return LogicalForm::entity(std::get<EntityId>(term));
}

// One JOIN step from `base` (denoting `nodes`) in both orientations, grouped
// by relation.
void extend(const LogicalForm& base, const std::vector<NodeId>& nodes, std::size_t depth, const TripleStore& store,
            std::optional<RelationId> type_rel, std::vector<Candidate>& out) {
  std::map<RelationId, std::set<NodeId>> subjects;
  std::map<RelationId, std::set<NodeId>> objects;
  for (NodeId n : nodes) {
    for (const auto& e : store.in_edges(n))
      if (e.relation != type_rel) subjects[e.relation].insert(e.node);
    for (const auto& e : store.out_edges(n))
      if (e.relation != type_rel) objects[e.relation].insert(e.node);
  }
  for (auto& [rel, set] : subjects)
    out.push_back({LogicalForm::join(store.relation_name(rel), base, false), {set.begin(), set.end()}, depth});
  for (auto& [rel, set] : objects)
    out.push_back({LogicalForm::join(store.relation_name(rel), base, true), {set.begin(), set.end()}, depth});
}

}  // namespace

std::vector<LogicalForm> enumerate_elfs(const std::vector<StartPoint>& starts, const TripleStore& store,
                                        const EnumConfig& config) {
  if (config.hop_limit < 1 || config.hop_limit > 2) throw std::invalid_argument("hop_limit must be 1 or 2");
  const auto type_rel = store.type_relation_id();

  std::vector<Candidate> chains;
  for (const auto& start : starts) {
    if (const auto* id = std::get_if<EntityId>(&start.value); id && looks_like_class(*id)) continue;
    auto node = store.find_node(start.value);
    if (!node) continue;
    std::vector<Candidate> first;
    extend(anchor_form(start.value), {*node}, 1, store, type_rel, first);
    if (config.hop_limit >= 2)
      for (const auto& c : first) extend(c.form, c.denotation, 2, store, type_rel, chains);
    std::move(first.begin(), first.end(), std::back_inserter(chains));
  }

  std::vector<std::pair<std::size_t, LogicalForm>> forms;
  for (const auto& c : chains) {
    forms.emplace_back(c.relations, c.form);
    if (!config.include_class_constraint || !type_rel) continue;
    std::set<NodeId> classes;
    for (NodeId n : c.denotation)
      for (const auto& e : store.out_edges(n, *type_rel)) classes.insert(e.node);
    for (NodeId cls : classes) {
      const auto& name = std::get<EntityId>(store.node(cls));
      if (store.has_class(name) && looks_like_class(name))
        forms.emplace_back(c.relations, LogicalForm::conj(LogicalForm::class_ref(name), c.form));
    }
  }

  std::vector<std::tuple<std::size_t, std::string, LogicalForm>> keyed;
  keyed.reserve(forms.size());
  for (auto& [depth, form] : forms) {
    auto canonical = canonicalize(form);
    keyed.emplace_back(depth, print_sexpr(canonical), std::move(canonical));
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return std::tie(std::get<0>(a), std::get<1>(a)) <
                                                      std::tie(std::get<0>(b), std::get<1>(b)); });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return std::get<1>(a) == std::get<1>(b); }),
              keyed.end());

  std::vector<LogicalForm> out;
  for (auto& k : keyed) {
    if (out.size() >= config.max_candidates) break;
    out.push_back(std::move(std::get<2>(k)));
  }
  return out;
}

}  // namespace kbqa
