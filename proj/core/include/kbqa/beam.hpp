#pragma once

#include <span>
#include <vector>

#include "kbqa/grammar.hpp"
#include "kbqa/token_scorers.hpp"

namespace kbqa {

struct Hypothesis {
  std::vector<TokenId> tokens;  // ends with the end token when finished
  double log_prob = 0.0;
  GrammarState state;
  bool finished = false;
};

struct BeamConfig {
  std::size_t beam_size = 10;
  std::size_t max_len = 128;
  /// Rank by log_prob / length instead of the raw sum.
  bool length_normalize = false;
};

/// Beam search. With `constraints` set, tokens outside the grammar state's
/// allowed_next are dropped before expansion; without, any token may follow
/// and emitting the end token finishes a hypothesis.
///
/// Candidates are ordered by score, ties by token sequence. Finished
/// hypotheses leave the beam; the search stops once beam_size hypotheses have
/// finished and no live one can beat them, or at max_len tokens. Returns at
/// most beam_size finished hypotheses, best first (empty if none finished).
/// Throws ScorerError when the scorer returns a row of the wrong size.
std::vector<Hypothesis> beam_search(const TokenScorer& scorer, std::span<const TokenId> context,
                                    const DecodeConstraints* constraints, const BeamConfig& config = {});

/// Teacher-forced negative log-likelihood of `target` (which must end with the
/// end token): -sum_t log p(y_t | y_<t, context).
double sequence_nll(const TokenScorer& scorer, std::span<const TokenId> context, std::span<const TokenId> target);

}  // namespace kbqa
