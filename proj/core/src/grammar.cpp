#include "kbqa/grammar.hpp"

#include <algorithm>

#include "kbqa/error.hpp"

namespace kbqa {
namespace {

constexpr std::uint8_t kMaxMantissaDigits = 15;
constexpr std::uint8_t kMaxExponentDigits = 2;

bool is_digit(TokenId t) { return t >= Vocabulary::kDigit0 && t < Vocabulary::kDigit0 + 10; }

void push_digits(std::vector<TokenId>& out) {
  for (TokenId d = 0; d < 10; ++d) out.push_back(Vocabulary::kDigit0 + d);
}

void push_trie_children(const SchemaTrie* trie, SchemaTrie::NodeIndex node, std::vector<TokenId>& out) {
  if (!trie) return;
  for (const auto& [token, next] : trie->children(node)) out.push_back(token);
}

}  // namespace

void DecodeConstraints::set_entities(const std::vector<EntityId>& ids) {
  entities.clear();
  for (const auto& id : ids) {
    auto token = vocab ? vocab->find(TokenKind::Entity, id) : std::nullopt;
    if (!token) continue;
    try {
      auto form = parse_sexpr(id);
      if (form.kind() != ExprKind::Entity || form.symbol() != id) continue;
    } catch (const Error&) {
      continue;
    }
    entities.push_back(*token);
  }
  std::sort(entities.begin(), entities.end());
  entities.erase(std::unique(entities.begin(), entities.end()), entities.end());
}

GrammarState::GrammarState() { stack_.push_back(Slot{Frame::Top, 0}); }

Expectation GrammarState::slot_expectation() const {
  const auto& top = stack_.back();
  switch (top.frame) {
    case Frame::Top: return top.position == 0 ? Expectation::ExpressionOrCount : Expectation::End;
    case Frame::And: return top.position < 2 ? Expectation::Expression : Expectation::Close;
    case Frame::Join:
      if (top.position == 0) return Expectation::RelationOrReverse;
      return top.position == 1 ? Expectation::JoinTarget : Expectation::Close;
    case Frame::Reverse: return top.position == 0 ? Expectation::Relation : Expectation::Close;
    case Frame::Count: return top.position == 0 ? Expectation::Expression : Expectation::Close;
    case Frame::ArgMin:
    case Frame::ArgMax:
      if (top.position == 0) return Expectation::Expression;
      return top.position == 1 ? Expectation::Relation : Expectation::Close;
    case Frame::Compare:
      if (top.position == 0) return Expectation::Relation;
      return top.position == 1 ? Expectation::NumericLiteral : Expectation::Close;
  }
  return Expectation::Close;
}

Expectation GrammarState::expectation() const {
  if (phase_ == Phase::Finished) return Expectation::Finished;
  if (phase_ == Phase::AfterOpen) return Expectation::Operator;
  return slot_expectation();
}

bool GrammarState::done() const { return phase_ == Phase::Ready && slot_expectation() == Expectation::End; }

void GrammarState::complete_atom() {
  phase_ = Phase::Ready;
  ++stack_.back().position;
}

bool GrammarState::literal_can_end() const {
  return lit_ == Lit::Int || lit_ == Lit::Frac || lit_ == Lit::ExpDigits || lit_ == Lit::Tagged;
}

void GrammarState::literal_allowed(const DecodeConstraints& c, std::vector<TokenId>& out) const {
  switch (lit_) {
    case Lit::Sign:
    case Lit::Point:
    case Lit::ExpSign: push_digits(out); break;
    case Lit::Int:
      if (lit_digits_ < kMaxMantissaDigits) push_digits(out);
      out.insert(out.end(), {Vocabulary::kDot, Vocabulary::kExponent, Vocabulary::kTypeMarker});
      break;
    case Lit::Frac:
      if (lit_digits_ < kMaxMantissaDigits) push_digits(out);
      out.insert(out.end(), {Vocabulary::kExponent, Vocabulary::kTypeMarker});
      break;
    case Lit::Exp:
      out.push_back(Vocabulary::kMinus);
      push_digits(out);
      break;
    case Lit::ExpDigits:
      if (lit_digits_ < kMaxExponentDigits) push_digits(out);
      out.push_back(Vocabulary::kTypeMarker);
      break;
    case Lit::Marker:
      if (!c.vocab) break;
      for (TokenId t : c.vocab->numeric_tags())
        if (!lit_fraction_ || c.vocab->tag_accepts_fraction(t)) out.push_back(t);
      break;
    case Lit::Tagged: break;
  }
}

bool GrammarState::advance_literal(TokenId t, const DecodeConstraints& c) {
  auto start_digits = [&](Lit next) {
    lit_ = next;
    lit_digits_ = 1;
    return true;
  };
  auto more_digits = [&](std::uint8_t limit) {
    if (lit_digits_ >= limit) return false;
    ++lit_digits_;
    return true;
  };
  switch (lit_) {
    case Lit::Sign: return is_digit(t) && start_digits(Lit::Int);
    case Lit::Point: return is_digit(t) && start_digits(Lit::Frac);
    case Lit::ExpSign: return is_digit(t) && start_digits(Lit::ExpDigits);
    case Lit::Int:
    case Lit::Frac:
      if (is_digit(t)) return more_digits(kMaxMantissaDigits);
      if (t == Vocabulary::kDot && lit_ == Lit::Int) {
        lit_ = Lit::Point;
        lit_fraction_ = true;
        return true;
      }
      if (t == Vocabulary::kExponent) {
        lit_ = Lit::Exp;
        lit_fraction_ = true;
        return true;
      }
      if (t == Vocabulary::kTypeMarker) {
        lit_ = Lit::Marker;
        return true;
      }
      return false;
    case Lit::Exp:
      if (t == Vocabulary::kMinus) {
        lit_ = Lit::ExpSign;
        return true;
      }
      return is_digit(t) && start_digits(Lit::ExpDigits);
    case Lit::ExpDigits:
      if (is_digit(t)) return more_digits(kMaxExponentDigits);
      if (t == Vocabulary::kTypeMarker) {
        lit_ = Lit::Marker;
        return true;
      }
      return false;
    case Lit::Marker:
      if (!c.vocab || !c.vocab->is_numeric_tag(t)) return false;
      if (lit_fraction_ && !c.vocab->tag_accepts_fraction(t)) return false;
      lit_ = Lit::Tagged;
      return true;
    case Lit::Tagged: return false;
  }
  return false;
}

void GrammarState::allowed_into(const DecodeConstraints& c, std::vector<TokenId>& out) const {
  switch (phase_) {
    case Phase::Finished: return;
    case Phase::AfterOpen: {
      auto e = slot_expectation();
      if (e == Expectation::RelationOrReverse) {
        out.push_back(Vocabulary::kReverse);
        return;
      }
      out.insert(out.end(), {Vocabulary::kAnd, Vocabulary::kJoin, Vocabulary::kArgMin, Vocabulary::kArgMax,
                             Vocabulary::kLt, Vocabulary::kLe, Vocabulary::kGt, Vocabulary::kGe});
      if (e == Expectation::ExpressionOrCount) out.push_back(Vocabulary::kCount);
      return;
    }
    case Phase::InClass:
    case Phase::InRelation: {
      const auto* trie = phase_ == Phase::InClass ? c.classes : c.relations;
      push_trie_children(trie, trie_node_, out);
      if (trie && trie->is_terminal(trie_node_)) {
        auto next = *this;
        next.complete_atom();
        next.allowed_into(c, out);
      }
      return;
    }
    case Phase::InLiteral:
      literal_allowed(c, out);
      if (literal_can_end()) {
        auto next = *this;
        next.complete_atom();
        next.allowed_into(c, out);
      }
      return;
    case Phase::Ready: break;
  }
  switch (slot_expectation()) {
    case Expectation::JoinTarget:
      out.push_back(Vocabulary::kMinus);
      push_digits(out);
      [[fallthrough]];
    case Expectation::Expression:
    case Expectation::ExpressionOrCount:
      out.push_back(Vocabulary::kOpen);
      push_trie_children(c.classes, SchemaTrie::kRoot, out);
      out.insert(out.end(), c.entities.begin(), c.entities.end());
      return;
    case Expectation::RelationOrReverse:
      out.push_back(Vocabulary::kOpen);
      [[fallthrough]];
    case Expectation::Relation: push_trie_children(c.relations, SchemaTrie::kRoot, out); return;
    case Expectation::NumericLiteral:
      out.push_back(Vocabulary::kMinus);
      push_digits(out);
      return;
    case Expectation::Close: out.push_back(Vocabulary::kClose); return;
    case Expectation::End: out.push_back(Vocabulary::kEnd); return;
    case Expectation::Operator:
    case Expectation::Finished: return;
  }
}

std::vector<TokenId> GrammarState::allowed_next(const DecodeConstraints& c) const {
  std::vector<TokenId> out;
  allowed_into(c, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool GrammarState::allows(TokenId token, const DecodeConstraints& c) const {
  auto copy = *this;
  return copy.advance(token, c);
}

bool GrammarState::advance(TokenId t, const DecodeConstraints& c) {
  switch (phase_) {
    case Phase::Finished: return false;
    case Phase::AfterOpen: {
      auto e = slot_expectation();
      std::optional<Frame> frame;
      if (e == Expectation::RelationOrReverse) {
        if (t == Vocabulary::kReverse) frame = Frame::Reverse;
      } else if (t == Vocabulary::kAnd) {
        frame = Frame::And;
      } else if (t == Vocabulary::kJoin) {
        frame = Frame::Join;
      } else if (t == Vocabulary::kArgMin) {
        frame = Frame::ArgMin;
      } else if (t == Vocabulary::kArgMax) {
        frame = Frame::ArgMax;
      } else if (t >= Vocabulary::kLt && t <= Vocabulary::kGe) {
        frame = Frame::Compare;
      } else if (t == Vocabulary::kCount && e == Expectation::ExpressionOrCount) {
        frame = Frame::Count;
      }
      if (!frame) return false;
      stack_.push_back(Slot{*frame, 0});
      phase_ = Phase::Ready;
      return true;
    }
    case Phase::InClass:
    case Phase::InRelation: {
      const auto* trie = phase_ == Phase::InClass ? c.classes : c.relations;
      if (!trie) return false;
      if (auto next = trie->child(trie_node_, t)) {
        trie_node_ = *next;
        return true;
      }
      if (!trie->is_terminal(trie_node_)) return false;
      complete_atom();
      return advance(t, c);
    }
    case Phase::InLiteral:
      if (advance_literal(t, c)) return true;
      if (!literal_can_end()) return false;
      complete_atom();
      return advance(t, c);
    case Phase::Ready: break;
  }

  auto e = slot_expectation();
  auto start_literal = [&] {
    phase_ = Phase::InLiteral;
    lit_fraction_ = false;
    if (t == Vocabulary::kMinus) {
      lit_ = Lit::Sign;
      lit_digits_ = 0;
      return true;
    }
    if (!is_digit(t)) return false;
    lit_ = Lit::Int;
    lit_digits_ = 1;
    return true;
  };
  auto start_schema = [&](const SchemaTrie* trie, Phase phase) {
    if (!trie) return false;
    auto next = trie->child(SchemaTrie::kRoot, t);
    if (!next) return false;
    phase_ = phase;
    trie_node_ = *next;
    return true;
  };
  switch (e) {
    case Expectation::JoinTarget:
      if (t == Vocabulary::kMinus || is_digit(t)) return start_literal();
      [[fallthrough]];
    case Expectation::Expression:
    case Expectation::ExpressionOrCount:
      if (t == Vocabulary::kOpen) {
        phase_ = Phase::AfterOpen;
        return true;
      }
      if (std::binary_search(c.entities.begin(), c.entities.end(), t)) {
        complete_atom();
        return true;
      }
      return start_schema(c.classes, Phase::InClass);
    case Expectation::RelationOrReverse:
      if (t == Vocabulary::kOpen) {
        phase_ = Phase::AfterOpen;
        return true;
      }
      [[fallthrough]];
    case Expectation::Relation: return start_schema(c.relations, Phase::InRelation);
    case Expectation::NumericLiteral:
      if (t == Vocabulary::kMinus || is_digit(t)) return start_literal();
      return false;
    case Expectation::Close:
      if (t != Vocabulary::kClose) return false;
      stack_.pop_back();
      complete_atom();
      return true;
    case Expectation::End:
      if (t != Vocabulary::kEnd) return false;
      phase_ = Phase::Finished;
      return true;
    case Expectation::Operator:
    case Expectation::Finished: return false;
  }
  return false;
}

std::optional<GrammarState> GrammarState::replay(std::span<const TokenId> tokens, const DecodeConstraints& c) {
  GrammarState state;
  for (TokenId t : tokens)
    if (!state.advance(t, c)) return std::nullopt;
  return state;
}

}  // namespace kbqa
