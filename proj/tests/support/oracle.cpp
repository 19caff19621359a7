#include "oracle.hpp"

#include <map>

#include "kbqa/executor.hpp"
#include "kbqa/sexpr.hpp"

namespace kbqa::test {
namespace {

std::string key(const Term& t) {
  if (const auto* lit = std::get_if<LiteralValue>(&t)) return "L" + lit->value_key();
  return "E" + std::get<EntityId>(t);
}

struct Walk {
  LogicalForm form;
  std::set<std::string> nodes;
};

}  // namespace

std::set<std::string> completeness_oracle(const std::vector<StartPoint>& starts, const TripleStore& store,
                                          const EnumConfig& config) {
  const auto triples = store.triples();
  const auto& type_rel = store.type_relation();

  std::set<std::string> relations;
  std::map<std::string, std::set<std::string>> members;  // class -> entity keys
  for (const auto& t : triples) {
    if (t.relation == type_rel) {
      if (const auto* c = std::get_if<EntityId>(&t.object)) members[*c].insert(key(Term(t.subject)));
    } else {
      relations.insert(t.relation);
    }
  }

  auto step = [&](const Walk& from, const std::string& rel, bool reversed) {
    Walk w{LogicalForm::join(rel, from.form, reversed), {}};
    for (const auto& t : triples) {
      if (t.relation != rel) continue;
      if (!reversed && from.nodes.count(key(t.object))) w.nodes.insert(key(Term(t.subject)));
      if (reversed && from.nodes.count(key(Term(t.subject)))) w.nodes.insert(key(t.object));
    }
    return w;
  };

  std::vector<Walk> walks;
  for (const auto& start : starts) {
    std::string k = key(start.value);
    bool present = false;
    for (const auto& t : triples)
      if (t.relation != type_rel && (key(t.object) == k || key(Term(t.subject)) == k)) present = true;
    if (!present) continue;
    Walk anchor{std::holds_alternative<LiteralValue>(start.value)
                    ? LogicalForm::literal(std::get<LiteralValue>(start.value))
                    : LogicalForm::entity(std::get<EntityId>(start.value)),
                {k}};
    for (const auto& r1 : relations) {
      for (bool rev1 : {false, true}) {
        auto one = step(anchor, r1, rev1);
        if (one.nodes.empty()) continue;
        walks.push_back(one);
        if (config.hop_limit < 2) continue;
        for (const auto& r2 : relations)
          for (bool rev2 : {false, true}) walks.push_back(step(one, r2, rev2));
      }
    }
  }

  std::set<std::string> out;
  for (const auto& w : walks) {
    if (w.nodes.empty()) continue;
    out.insert(print_canonical(w.form));
    if (!config.include_class_constraint) continue;
    for (const auto& [cls, ids] : members) {
      bool hit = false;
      for (const auto& n : w.nodes) hit = hit || ids.count(n);
      if (hit) out.insert(print_canonical(LogicalForm::conj(LogicalForm::class_ref(cls), w.form)));
    }
  }
  return out;
}

}  // namespace kbqa::test

namespace kbqa::test {
namespace {

using KeySet = std::map<std::string, std::string>;  // value key -> printed term

class Reference {
 public:
  explicit Reference(const TripleStore& store) : triples_(store.triples()), type_rel_(store.type_relation()) {}

  KeySet eval(const LogicalForm& f) const {
    KeySet out;
    switch (f.kind()) {
      case ExprKind::Entity:
        for (const auto& t : triples_) {
          if (t.subject == f.symbol()) out.emplace(key(Term(t.subject)), t.subject);
          if (t.relation != type_rel_ && key(t.object) == key(Term(f.symbol())))
            out.emplace(key(t.object), term_to_string(t.object));
        }
        return out;
      case ExprKind::Literal: {
        Term lit(f.literal_value());
        for (const auto& t : triples_)
          if (key(t.object) == key(lit)) out.emplace(key(t.object), term_to_string(t.object));
        return out;
      }
      case ExprKind::Class:
        for (const auto& t : triples_)
          if (t.relation == type_rel_ && key(t.object) == key(Term(f.symbol())))
            out.emplace(key(Term(t.subject)), t.subject);
        return out;
      case ExprKind::And: {
        auto a = eval(f.child(0));
        auto b = eval(f.child(1));
        for (const auto& [k, v] : a)
          if (b.count(k)) out.emplace(k, v);
        return out;
      }
      case ExprKind::Join: {
        auto inner = eval(f.child(0));
        for (const auto& t : triples_) {
          if (t.relation != f.symbol()) continue;
          if (!f.reversed() && inner.count(key(t.object))) out.emplace(key(Term(t.subject)), t.subject);
          if (f.reversed() && inner.count(key(Term(t.subject)))) out.emplace(key(t.object), term_to_string(t.object));
        }
        return out;
      }
      case ExprKind::Compare:
        for (const auto& t : triples_) {
          const auto* lit = std::get_if<LiteralValue>(&t.object);
          if (t.relation != f.symbol() || !lit) continue;
          auto c = compare_values(*lit, f.literal_value());
          if (!c) continue;
          bool keep = false;
          switch (f.op()) {
            case CompareOp::Lt: keep = *c < 0; break;
            case CompareOp::Le: keep = *c <= 0; break;
            case CompareOp::Gt: keep = *c > 0; break;
            case CompareOp::Ge: keep = *c >= 0; break;
          }
          if (keep) out.emplace(key(Term(t.subject)), t.subject);
        }
        return out;
      case ExprKind::ArgMin:
      case ExprKind::ArgMax: {
        bool is_min = f.kind() == ExprKind::ArgMin;
        auto inner = eval(f.child(0));
        std::map<std::string, double> best;
        for (const auto& t : triples_) {
          const auto* lit = std::get_if<LiteralValue>(&t.object);
          if (t.relation != f.symbol() || !lit || !lit->is_numeric() || !inner.count(key(Term(t.subject)))) continue;
          double v = lit->as_double();
          auto [it, fresh] = best.emplace(t.subject, v);
          if (!fresh) it->second = is_min ? std::min(it->second, v) : std::max(it->second, v);
        }
        if (best.empty()) return out;
        double extreme = best.begin()->second;
        for (const auto& [s, v] : best) extreme = is_min ? std::min(extreme, v) : std::max(extreme, v);
        for (const auto& [s, v] : best)
          if (v == extreme) out.emplace(key(Term(s)), s);
        return out;
      }
      case ExprKind::Count: break;
    }
    return out;
  }

 private:
  std::vector<Triple> triples_;
  std::string type_rel_;
};

}  // namespace

ReferenceAnswer reference_evaluate(const LogicalForm& form, const TripleStore& store) {
  Reference ref(store);
  ReferenceAnswer answer;
  if (form.kind() == ExprKind::Count) {
    answer.is_count = true;
    answer.count = ref.eval(form.child(0)).size();
    return answer;
  }
  for (const auto& [k, v] : ref.eval(form)) answer.items.insert(v);
  return answer;
}

ReferenceAnswer to_reference(const AnswerSet& answers) {
  ReferenceAnswer out;
  if (answers.is_number()) {
    out.is_count = true;
    out.count = static_cast<std::size_t>(answers.count());
    return out;
  }
  out.items.insert(answers.items().begin(), answers.items().end());
  return out;
}

}  // namespace kbqa::test
