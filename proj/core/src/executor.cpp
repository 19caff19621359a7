#include "kbqa/executor.hpp"

#include <algorithm>
#include <iterator>
#include <limits>

#include "kbqa/error.hpp"

namespace kbqa {

AnswerSet AnswerSet::entities(std::vector<std::string> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  AnswerSet a;
  a.kind_ = Kind::Entities;
  a.items_ = std::move(items);
  return a;
}

AnswerSet AnswerSet::number(std::int64_t value) {
  AnswerSet a;
  a.kind_ = Kind::Number;
  a.number_ = value;
  return a;
}

std::set<std::string> AnswerSet::as_strings() const {
  if (is_number()) return {std::to_string(number_)};
  return {items_.begin(), items_.end()};
}

std::string to_string(const AnswerSet& answers) {
  if (answers.is_number()) return std::to_string(answers.count());
  std::string out = "{";
  for (std::size_t i = 0; i < answers.items().size(); ++i) {
    if (i) out += ", ";
    out += answers.items()[i];
  }
  return out + "}";
}

AnswerSet answers_from_nodes(const NodeSet& nodes, const TripleStore& store) {
  std::vector<std::string> items;
  items.reserve(nodes.size());
  for (auto n : nodes) items.push_back(store.node_text(n));
  return AnswerSet::entities(std::move(items));
}

namespace {

void normalize(NodeSet& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

bool compare_holds(CompareOp op, std::partial_ordering order) {
  switch (op) {
    case CompareOp::Lt: return order == std::partial_ordering::less;
    case CompareOp::Le: return order == std::partial_ordering::less || order == std::partial_ordering::equivalent;
    case CompareOp::Gt: return order == std::partial_ordering::greater;
    case CompareOp::Ge: return order == std::partial_ordering::greater || order == std::partial_ordering::equivalent;
  }
  return false;
}

NodeSet eval(const LogicalForm& f, const TripleStore& store) {
  switch (f.kind()) {
    case ExprKind::Entity: {
      auto node = store.find_entity(f.symbol());
      return node ? NodeSet{*node} : NodeSet{};
    }
    case ExprKind::Literal: {
      auto node = store.find_node(Term(f.literal_value()));
      return node ? NodeSet{*node} : NodeSet{};
    }
    case ExprKind::Class: {
      auto members = store.class_members(f.symbol());
      return NodeSet(members.begin(), members.end());
    }
    case ExprKind::And: {
      auto a = eval(f.child(0), store);
      if (a.empty()) return a;
      auto b = eval(f.child(1), store);
      NodeSet out;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
      return out;
    }
    case ExprKind::Join: {
      auto relation = store.find_relation(f.symbol());
      if (!relation) return {};
      auto targets = eval(f.child(0), store);
      NodeSet out;
      auto pairs = store.relation_pairs(*relation);
      if (targets.size() > pairs.size()) {
        // The relation is smaller than the operand: scan it instead.
        for (auto [s, o] : pairs) {
          auto probe = f.reversed() ? s : o;
          if (std::binary_search(targets.begin(), targets.end(), probe)) out.push_back(f.reversed() ? o : s);
        }
      } else {
        for (auto t : targets) {
          auto edges = f.reversed() ? store.out_edges(t, *relation) : store.in_edges(t, *relation);
          for (const auto& e : edges) out.push_back(e.node);
        }
      }
      normalize(out);
      return out;
    }
    case ExprKind::Compare: {
      const auto& bound = f.literal_value();
      if (!bound.is_numeric() && bound.kind() != LiteralKind::DateTime) {
        throw TypeError("comparison literal " + bound.to_string() + " is not numeric or datetime");
      }
      auto relation = store.find_relation(f.symbol());
      if (!relation) return {};
      NodeSet out;
      for (auto [s, o] : store.relation_pairs(*relation)) {
        if (!store.is_literal(o)) continue;
        auto order = compare_values(std::get<LiteralValue>(store.node(o)), bound);
        if (order && compare_holds(f.op(), *order)) out.push_back(s);
      }
      normalize(out);
      return out;
    }
    case ExprKind::ArgMin:
    case ExprKind::ArgMax: {
      bool minimize = f.kind() == ExprKind::ArgMin;
      auto candidates = eval(f.child(0), store);
      auto relation = store.find_relation(f.symbol());
      if (!relation) return {};
      std::vector<std::pair<NodeId, double>> scored;
      for (auto c : candidates) {
        std::optional<double> best;
        for (const auto& e : store.out_edges(c, *relation)) {
          if (!store.is_literal(e.node)) continue;
          const auto& lit = std::get<LiteralValue>(store.node(e.node));
          if (!lit.is_numeric()) continue;
          double v = lit.as_double();
          if (!best || (minimize ? v < *best : v > *best)) best = v;
        }
        if (best) scored.emplace_back(c, *best);
      }
      if (scored.empty()) return {};
      double extreme = scored.front().second;
      for (const auto& [node, v] : scored) extreme = minimize ? std::min(extreme, v) : std::max(extreme, v);
      NodeSet out;
      for (const auto& [node, v] : scored)
        if (v == extreme) out.push_back(node);
      return out;
    }
    case ExprKind::Count: throw TypeError("COUNT is not set-valued");
  }
  return {};
}

}  // namespace

NodeSet evaluate_nodes(const LogicalForm& form, const TripleStore& store) { return eval(form, store); }

AnswerSet evaluate(const LogicalForm& form, const TripleStore& store) {
  if (form.kind() == ExprKind::Count) {
    return AnswerSet::number(static_cast<std::int64_t>(eval(form.child(0), store).size()));
  }
  return answers_from_nodes(eval(form, store), store);
}

bool is_valid_prediction(const LogicalForm& form, const TripleStore& store) {
  if (!validate_schema(form, store).empty()) return false;
  try {
    auto answers = evaluate(form, store);
    return answers.is_number() || !answers.empty();
  } catch (const Error&) {
    return false;
  }
}

bool is_valid_prediction(std::string_view sexpr, const TripleStore& store) {
  try {
    return is_valid_prediction(parse_sexpr(sexpr), store);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace kbqa
