#include "kbqa/context.hpp"

#include <algorithm>
#include <set>

#include "kbqa/error.hpp"
#include "kbqa/text.hpp"

namespace kbqa {

std::string AssembledContext::text() const {
  std::string out = question + " <entities>";
  for (const auto& [label, id] : entities) out += " (" + label + ", " + id + ")";
  out += " <elfs>";
  for (std::size_t i = 0; i < elfs.size(); ++i) out += (i ? " ; " : " ") + elfs[i];
  out += " <schema>";
  std::size_t n = 0;
  for (const auto* list : {&classes, &relations})
    for (const auto& item : *list) out += (n++ ? " ; " : " ") + item;
  return out;
}

AssembledContext assemble_context(const Question& question, const std::vector<LinkedEntity>& links,
                                  const std::vector<ScoredForm>& elfs, const SchemaRetrieval& schema,
                                  const TripleStore& store, const Vocabulary& vocab, std::size_t budget) {
  enum class Section { Entity, Elf, Class, Relation };
  struct Item {
    Section section;
    std::vector<TokenId> tokens;
    std::string label;
    std::string value;
  };

  std::vector<Item> items;
  std::set<EntityId> seen;
  for (const auto& link : links) {
    if (!seen.insert(link.entity).second) continue;
    Item item{Section::Entity, {Vocabulary::kOpen}, store.label_of(link.entity), link.entity};
    auto label = vocab.encode_text(item.label);
    item.tokens.insert(item.tokens.end(), label.begin(), label.end());
    item.tokens.push_back(Vocabulary::kComma);
    item.tokens.push_back(vocab.find(TokenKind::Entity, link.entity).value_or(Vocabulary::kUnknown));
    item.tokens.push_back(Vocabulary::kClose);
    items.push_back(std::move(item));
  }
  auto encode_or_text = [&](auto&& encode, const std::string& text) {
    try {
      return encode();
    } catch (const TokenizeError&) {
      return vocab.encode_text(text);
    }
  };
  bool first = true;
  for (const auto& elf : elfs) {
    Item item{Section::Elf, {}, {}, elf.text};
    if (!first) item.tokens.push_back(Vocabulary::kSemicolon);
    auto body = encode_or_text([&] { return vocab.encode_form(elf.form); }, elf.text);
    item.tokens.insert(item.tokens.end(), body.begin(), body.end());
    items.push_back(std::move(item));
    first = false;
  }
  first = true;
  for (const auto& [list, section] : {std::pair{&schema.classes, Section::Class},
                                      std::pair{&schema.relations, Section::Relation}}) {
    for (const auto& s : *list) {
      Item item{section, {}, {}, s.name};
      if (!first) item.tokens.push_back(Vocabulary::kSemicolon);
      auto body = encode_or_text([&] { return vocab.encode_schema_name(s.name); }, s.name);
      item.tokens.insert(item.tokens.end(), body.begin(), body.end());
      items.push_back(std::move(item));
      first = false;
    }
  }

  AssembledContext ctx;
  ctx.question = question.text;
  auto q_tokens = vocab.encode_text(question.text);
  const std::size_t sentinels = 3;
  std::size_t room = budget > sentinels ? budget - sentinels : 0;
  if (q_tokens.size() > room) q_tokens.resize(room);
  std::size_t used = q_tokens.size() + sentinels;

  std::vector<const Item*> kept;
  for (const auto& item : items) {
    if (used + item.tokens.size() > budget) break;
    used += item.tokens.size();
    kept.push_back(&item);
  }

  ctx.tokens = std::move(q_tokens);
  auto emit_section = [&](TokenId sentinel, std::initializer_list<Section> sections) {
    ctx.tokens.push_back(sentinel);
    for (const auto* item : kept) {
      if (std::find(sections.begin(), sections.end(), item->section) == sections.end()) continue;
      ctx.tokens.insert(ctx.tokens.end(), item->tokens.begin(), item->tokens.end());
      switch (item->section) {
        case Section::Entity: ctx.entities.emplace_back(item->label, item->value); break;
        case Section::Elf: ctx.elfs.push_back(item->value); break;
        case Section::Class: ctx.classes.push_back(item->value); break;
        case Section::Relation: ctx.relations.push_back(item->value); break;
      }
    }
  };
  emit_section(Vocabulary::kEntitiesSection, {Section::Entity});
  emit_section(Vocabulary::kElfsSection, {Section::Elf});
  emit_section(Vocabulary::kSchemaSection, {Section::Class, Section::Relation});
  if (ctx.tokens.size() > budget) ctx.tokens.resize(budget);
  return ctx;
}

}  // namespace kbqa
