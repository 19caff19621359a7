#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "kbqa/vocabulary.hpp"

namespace kbqa {

class LineProcess;

/// Autoregressive next-token distribution: one log-probability per vocabulary
/// id given the encoded context and the tokens emitted so far (without <s>).
class TokenScorer {
 public:
  virtual ~TokenScorer() = default;
  virtual std::vector<double> next_log_probs(std::span<const TokenId> context,
                                             std::span<const TokenId> prefix) const = 0;
  virtual std::size_t vocab_size() const = 0;
  /// Whether concurrent calls are safe.
  virtual bool reentrant() const { return true; }
};

class UniformScorer : public TokenScorer {
 public:
  explicit UniformScorer(std::size_t vocab_size) : size_(vocab_size) {}
  std::vector<double> next_log_probs(std::span<const TokenId>, std::span<const TokenId>) const override;
  std::size_t vocab_size() const override { return size_; }

 private:
  std::size_t size_;
};

/// Teacher that knows the answer. Targets are weighted token sequences
/// (ending with the end token). On a prefix shared by some targets the row is
/// (1 - epsilon) * next-token distribution of those targets (by weight)
/// + epsilon * uniform; off every target it is uniform. The context is
/// ignored.
class OracleScorer : public TokenScorer {
 public:
  struct Target {
    std::vector<TokenId> tokens;
    double weight = 1.0;
  };

  OracleScorer(std::size_t vocab_size, std::vector<Target> targets, double epsilon = 0.0);
  OracleScorer(std::size_t vocab_size, std::vector<TokenId> target, double epsilon = 0.0);

  std::vector<double> next_log_probs(std::span<const TokenId>, std::span<const TokenId> prefix) const override;
  std::size_t vocab_size() const override { return size_; }

 private:
  std::size_t size_;
  std::vector<Target> targets_;
  double epsilon_;
};

/// Order-n model over form token sequences with add-one smoothing; histories
/// are padded with <s>. The context is ignored.
class NgramScorer : public TokenScorer {
 public:
  NgramScorer(std::size_t vocab_size, const std::vector<std::vector<TokenId>>& corpus, std::size_t order = 3);

  std::vector<double> next_log_probs(std::span<const TokenId>, std::span<const TokenId> prefix) const override;
  std::size_t vocab_size() const override { return size_; }
  std::size_t order() const noexcept { return order_; }

 private:
  std::size_t size_;
  std::size_t order_;
  std::map<std::vector<TokenId>, std::map<TokenId, std::size_t>> counts_;
  std::map<std::vector<TokenId>, std::size_t> totals_;
};

/// Probability-space mixture sum_i w_i * p_i (weights are normalized).
class MixtureScorer : public TokenScorer {
 public:
  MixtureScorer(std::vector<std::shared_ptr<const TokenScorer>> parts, std::vector<double> weights);

  std::vector<double> next_log_probs(std::span<const TokenId> context, std::span<const TokenId> prefix) const override;
  std::size_t vocab_size() const override { return parts_.front()->vocab_size(); }
  bool reentrant() const override;

 private:
  std::vector<std::shared_ptr<const TokenScorer>> parts_;
  std::vector<double> log_weights_;
};

/// Child-process scorer: writes `NEXT\t<context ids>\t<prefix ids>` (ids
/// comma-joined) and reads one line of vocab_size space-separated
/// log-probabilities. Throws ScorerError on timeout or malformed replies.
class ExternalTokenScorer : public TokenScorer {
 public:
  ExternalTokenScorer(std::string command, std::size_t vocab_size,
                      std::chrono::milliseconds timeout = std::chrono::seconds(10));
  ~ExternalTokenScorer() override;

  std::vector<double> next_log_probs(std::span<const TokenId> context, std::span<const TokenId> prefix) const override;
  std::size_t vocab_size() const override { return size_; }
  bool reentrant() const override { return false; }

 private:
  std::unique_ptr<LineProcess> process_;
  std::size_t size_;
  std::chrono::milliseconds timeout_;
};

/// Funnels every call through one mutex; used for non-reentrant scorers.
class SerializedScorer : public TokenScorer {
 public:
  explicit SerializedScorer(std::shared_ptr<const TokenScorer> inner) : inner_(std::move(inner)) {}

  std::vector<double> next_log_probs(std::span<const TokenId> context, std::span<const TokenId> prefix) const override;
  std::size_t vocab_size() const override { return inner_->vocab_size(); }

 private:
  std::shared_ptr<const TokenScorer> inner_;
  mutable std::mutex mutex_;
};

}  // namespace kbqa
