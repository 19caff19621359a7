#include "kbqa/token_scorers.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "kbqa/error.hpp"
#include "kbqa/subprocess.hpp"

namespace kbqa {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string join_ids(std::span<const TokenId> ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace

std::vector<double> UniformScorer::next_log_probs(std::span<const TokenId>, std::span<const TokenId>) const {
  return std::vector<double>(size_, -std::log(static_cast<double>(size_)));
}

OracleScorer::OracleScorer(std::size_t vocab_size, std::vector<Target> targets, double epsilon)
    : size_(vocab_size), targets_(std::move(targets)), epsilon_(epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("oracle epsilon must be in [0, 1]");
  for (const auto& t : targets_) {
    if (t.weight <= 0.0) throw std::invalid_argument("oracle target weights must be positive");
    for (TokenId id : t.tokens)
      if (id >= size_) throw std::invalid_argument("oracle target token outside the vocabulary");
  }
}

OracleScorer::OracleScorer(std::size_t vocab_size, std::vector<TokenId> target, double epsilon)
    : OracleScorer(vocab_size, std::vector<Target>{Target{std::move(target), 1.0}}, epsilon) {}

std::vector<double> OracleScorer::next_log_probs(std::span<const TokenId>, std::span<const TokenId> prefix) const {
  std::vector<double> mass(size_, 0.0);
  double total = 0.0;
  for (const auto& t : targets_) {
    if (t.tokens.size() <= prefix.size()) continue;
    if (!std::equal(prefix.begin(), prefix.end(), t.tokens.begin())) continue;
    mass[t.tokens[prefix.size()]] += t.weight;
    total += t.weight;
  }
  double uniform = 1.0 / static_cast<double>(size_);
  std::vector<double> row(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    double p = total > 0.0 ? (1.0 - epsilon_) * mass[i] / total + epsilon_ * uniform : uniform;
    row[i] = p > 0.0 ? std::log(p) : kNegInf;
  }
  return row;
}

NgramScorer::NgramScorer(std::size_t vocab_size, const std::vector<std::vector<TokenId>>& corpus, std::size_t order)
    : size_(vocab_size), order_(order) {
  if (order == 0) throw std::invalid_argument("n-gram order must be positive");
  for (const auto& seq : corpus) {
    std::vector<TokenId> padded(order_ - 1, Vocabulary::kBegin);
    padded.insert(padded.end(), seq.begin(), seq.end());
    for (std::size_t i = order_ - 1; i < padded.size(); ++i) {
      std::vector<TokenId> history(padded.begin() + static_cast<std::ptrdiff_t>(i + 1 - order_),
                                   padded.begin() + static_cast<std::ptrdiff_t>(i));
      ++counts_[history][padded[i]];
      ++totals_[history];
    }
  }
}

std::vector<double> NgramScorer::next_log_probs(std::span<const TokenId>, std::span<const TokenId> prefix) const {
  std::vector<TokenId> history(order_ - 1, Vocabulary::kBegin);
  std::size_t take = std::min(prefix.size(), order_ - 1);
  std::copy(prefix.end() - static_cast<std::ptrdiff_t>(take), prefix.end(),
            history.end() - static_cast<std::ptrdiff_t>(take));
  auto v = static_cast<double>(size_);
  auto total_it = totals_.find(history);
  double total = total_it == totals_.end() ? 0.0 : static_cast<double>(total_it->second);
  std::vector<double> row(size_, std::log(1.0 / (total + v)));
  if (auto it = counts_.find(history); it != counts_.end()) {
    for (const auto& [token, count] : it->second)
      if (token < size_) row[token] = std::log((static_cast<double>(count) + 1.0) / (total + v));
  }
  return row;
}

MixtureScorer::MixtureScorer(std::vector<std::shared_ptr<const TokenScorer>> parts, std::vector<double> weights)
    : parts_(std::move(parts)) {
  if (parts_.empty() || parts_.size() != weights.size())
    throw std::invalid_argument("mixture needs one weight per scorer");
  double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (weights[i] < 0.0 || parts_[i]->vocab_size() != parts_[0]->vocab_size())
      throw std::invalid_argument("mixture parts must share a vocabulary and have non-negative weights");
    log_weights_.push_back(std::log(weights[i] / sum));
  }
}

bool MixtureScorer::reentrant() const {
  return std::all_of(parts_.begin(), parts_.end(), [](const auto& p) { return p->reentrant(); });
}

std::vector<double> MixtureScorer::next_log_probs(std::span<const TokenId> context,
                                                  std::span<const TokenId> prefix) const {
  std::vector<std::vector<double>> rows;
  for (const auto& p : parts_) rows.push_back(p->next_log_probs(context, prefix));
  std::vector<double> out(vocab_size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    double peak = kNegInf;
    for (std::size_t i = 0; i < rows.size(); ++i) peak = std::max(peak, log_weights_[i] + rows[i][t]);
    if (peak == kNegInf) {
      out[t] = kNegInf;
      continue;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) sum += std::exp(log_weights_[i] + rows[i][t] - peak);
    out[t] = peak + std::log(sum);
  }
  return out;
}

ExternalTokenScorer::ExternalTokenScorer(std::string command, std::size_t vocab_size,
                                         std::chrono::milliseconds timeout)
    : process_(std::make_unique<LineProcess>(std::move(command))), size_(vocab_size), timeout_(timeout) {}

ExternalTokenScorer::~ExternalTokenScorer() = default;

std::vector<double> ExternalTokenScorer::next_log_probs(std::span<const TokenId> context,
                                                        std::span<const TokenId> prefix) const {
  process_->write_line("NEXT\t" + join_ids(context) + "\t" + join_ids(prefix));
  auto line = process_->read_line(timeout_);
  std::vector<double> row;
  row.reserve(size_);
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (p == end) break;
    const char* field = p;
    while (p < end && *p != ' ' && *p != '\t') ++p;
    std::string_view text(field, static_cast<std::size_t>(p - field));
    double value = 0.0;
    if (text == "-inf" || text == "-Infinity") {
      value = kNegInf;
    } else {
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size())
        throw ScorerError("token scorer replied with a malformed number '" + std::string(text) + "'");
    }
    row.push_back(value);
  }
  if (row.size() != size_)
    throw ScorerError("token scorer returned " + std::to_string(row.size()) + " values, expected " +
                      std::to_string(size_));
  return row;
}

std::vector<double> SerializedScorer::next_log_probs(std::span<const TokenId> context,
                                                     std::span<const TokenId> prefix) const {
  std::lock_guard lock(mutex_);
  return inner_->next_log_probs(context, prefix);
}

}  // namespace kbqa
