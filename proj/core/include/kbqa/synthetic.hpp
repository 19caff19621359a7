#pragma once

#include <cstdint>
#include <vector>

#include "kbqa/kb_store.hpp"
#include "kbqa/pipeline.hpp"

namespace kbqa {

struct SyntheticConfig {
  std::size_t entities = 1000;
  std::size_t classes = 20;
  std::size_t relations_per_class = 3;
  std::size_t facts_per_entity = 3;
  std::size_t questions = 50;
  std::uint64_t seed = 7;
};

struct SyntheticKb {
  TripleStore store;
  /// One-hop questions with gold forms and answers.
  std::vector<QAExample> questions;
};

/// A random labeled KB with word-based schema names, aliases for every
/// entity, a numeric relation per class, and questions built from templates.
/// Deterministic for a given config.
SyntheticKb make_synthetic_kb(const SyntheticConfig& config = {});

}  // namespace kbqa
