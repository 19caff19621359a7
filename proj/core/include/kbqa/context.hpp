#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kbqa/retrievers.hpp"
#include "kbqa/vocabulary.hpp"

namespace kbqa {

/// Generator input: question, then `<entities>` with "(label, id)" pairs,
/// then `<elfs>`, then `<schema>` (classes before relations). Items are
/// separated by ";" inside the last two sections.
struct AssembledContext {
  std::string question;
  std::vector<std::pair<std::string, EntityId>> entities;
  std::vector<std::string> elfs;
  std::vector<std::string> classes;
  std::vector<std::string> relations;
  std::vector<TokenId> tokens;

  std::string text() const;
};

/// Serializes and tokenizes the context. When it exceeds `budget` tokens,
/// whole items are dropped from the tail; the question itself is cut only if
/// it alone does not fit. Duplicate entities are listed once.
AssembledContext assemble_context(const Question& question, const std::vector<LinkedEntity>& links,
                                  const std::vector<ScoredForm>& elfs, const SchemaRetrieval& schema,
                                  const TripleStore& store, const Vocabulary& vocab, std::size_t budget = 1000);

}  // namespace kbqa
