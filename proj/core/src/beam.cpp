#include "kbqa/beam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kbqa/error.hpp"

namespace kbqa {
namespace {

struct Expansion {
  std::size_t parent;
  TokenId token;
  double log_prob;
  double rank_score;
};

double rank_score(double log_prob, std::size_t length, bool normalize) {
  return normalize && length > 0 ? log_prob / static_cast<double>(length) : log_prob;
}

}  // namespace

std::vector<Hypothesis> beam_search(const TokenScorer& scorer, std::span<const TokenId> context,
                                    const DecodeConstraints* constraints, const BeamConfig& config) {
  std::vector<Hypothesis> alive(1);
  std::vector<Hypothesis> finished;
  if (config.beam_size == 0) return finished;
  const std::size_t vocab = scorer.vocab_size();
  if (constraints && constraints->vocab && constraints->vocab->size() != vocab)
    throw ScorerError("token scorer covers " + std::to_string(vocab) + " tokens, vocabulary has " +
                      std::to_string(constraints->vocab->size()));

  auto by_score = [&](const Hypothesis& a, const Hypothesis& b) {
    double sa = rank_score(a.log_prob, a.tokens.size(), config.length_normalize);
    double sb = rank_score(b.log_prob, b.tokens.size(), config.length_normalize);
    if (sa != sb) return sa > sb;
    return a.tokens < b.tokens;
  };

  std::vector<TokenId> all_tokens(vocab);
  std::iota(all_tokens.begin(), all_tokens.end(), TokenId{0});

  for (std::size_t step = 0; step < config.max_len && !alive.empty(); ++step) {
    std::vector<Expansion> expansions;
    for (std::size_t h = 0; h < alive.size(); ++h) {
      auto row = scorer.next_log_probs(context, alive[h].tokens);
      if (row.size() != vocab)
        throw ScorerError("token scorer row has " + std::to_string(row.size()) + " entries, expected " +
                          std::to_string(vocab));
      auto allowed = constraints ? alive[h].state.allowed_next(*constraints) : all_tokens;
      for (TokenId t : allowed) {
        if (t >= vocab) continue;
        double lp = row[t];
        if (std::isnan(lp) || lp == -std::numeric_limits<double>::infinity()) continue;
        double total = alive[h].log_prob + lp;
        expansions.push_back({h, t, total, rank_score(total, alive[h].tokens.size() + 1, config.length_normalize)});
      }
    }
    std::sort(expansions.begin(), expansions.end(), [&](const Expansion& a, const Expansion& b) {
      if (a.rank_score != b.rank_score) return a.rank_score > b.rank_score;
      if (a.parent != b.parent) return alive[a.parent].tokens < alive[b.parent].tokens;
      return a.token < b.token;
    });

    std::vector<Hypothesis> next;
    for (const auto& e : expansions) {
      if (next.size() >= config.beam_size) break;
      Hypothesis child;
      child.tokens = alive[e.parent].tokens;
      child.tokens.push_back(e.token);
      child.log_prob = e.log_prob;
      child.state = alive[e.parent].state;
      if (constraints) child.state.advance(e.token, *constraints);
      if (e.token == Vocabulary::kEnd && (!constraints || child.state.finished())) {
        child.finished = true;
        finished.push_back(std::move(child));
      } else {
        next.push_back(std::move(child));
      }
    }
    alive = std::move(next);

    if (finished.size() >= config.beam_size) {
      std::sort(finished.begin(), finished.end(), by_score);
      finished.resize(config.beam_size);
      if (alive.empty()) break;
      const auto& worst = finished.back();
      double worst_score = rank_score(worst.log_prob, worst.tokens.size(), config.length_normalize);
      double best_alive = -std::numeric_limits<double>::infinity();
      for (const auto& h : alive)
        best_alive = std::max(best_alive, rank_score(h.log_prob, h.tokens.size(), config.length_normalize));
      if (!config.length_normalize && best_alive <= worst_score) break;
    }
  }

  std::sort(finished.begin(), finished.end(), by_score);
  if (finished.size() > config.beam_size) finished.resize(config.beam_size);
  return finished;
}

double sequence_nll(const TokenScorer& scorer, std::span<const TokenId> context, std::span<const TokenId> target) {
  if (target.empty() || target.back() != Vocabulary::kEnd)
    throw std::invalid_argument("sequence_nll: target must end with the end token");
  double nll = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    auto row = scorer.next_log_probs(context, target.first(i));
    if (target[i] >= row.size()) throw ScorerError("token scorer row is shorter than the vocabulary");
    nll -= row[target[i]];
  }
  return nll;
}

}  // namespace kbqa
