#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kbqa/token_scorers.hpp"

namespace kbqa::test {

/// Deterministic 64-bit hash of a seed and a token prefix.
std::uint64_t prefix_hash(std::uint64_t seed, std::span<const TokenId> prefix);

/// Arbitrary but deterministic distributions: every (seed, prefix) pair gets
/// its own random logits, scaled by `sharpness`. `end_bias` is added to the
/// close and end logits so that random walks terminate.
class RandomTokenScorer : public TokenScorer {
 public:
  RandomTokenScorer(std::size_t vocab_size, std::uint64_t seed, double sharpness = 4.0, double end_bias = 0.0);
  std::vector<double> next_log_probs(std::span<const TokenId>, std::span<const TokenId> prefix) const override;
  std::size_t vocab_size() const override { return size_; }

 private:
  std::size_t size_;
  std::uint64_t seed_;
  double sharpness_;
  double end_bias_;
};

/// Oracle with reproducible mistakes. On the target path each step is
/// corrupted with probability epsilon (decided by hashing seed and prefix):
/// a random wrong token gets 0.6, the gold token 0.3. Uncorrupted steps put
/// 0.9 on gold. The remaining mass is spread uniformly; off the target path
/// rows are uniform.
class NoisyOracleScorer : public TokenScorer {
 public:
  NoisyOracleScorer(std::size_t vocab_size, std::vector<TokenId> target, double epsilon, std::uint64_t seed);
  std::vector<double> next_log_probs(std::span<const TokenId>, std::span<const TokenId> prefix) const override;
  std::size_t vocab_size() const override { return size_; }

 private:
  std::size_t size_;
  std::vector<TokenId> target_;
  double epsilon_;
  std::uint64_t seed_;
};

/// Row normalization helper: log-softmax in place.
void log_normalize(std::vector<double>& logits);

}  // namespace kbqa::test
