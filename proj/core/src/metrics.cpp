#include "kbqa/metrics.hpp"

#include <iomanip>
#include <random>
#include <sstream>
#include <unordered_map>

#include "kbqa/error.hpp"

namespace kbqa {

bool exact_match(const LogicalForm& predicted, const LogicalForm& gold) {
  return print_canonical(predicted) == print_canonical(gold);
}

bool exact_match(std::string_view predicted, std::string_view gold) {
  auto g = parse_sexpr(gold);
  try {
    return exact_match(parse_sexpr(predicted), g);
  } catch (const ParseError&) {
    return false;
  }
}

F1Score answer_f1(const std::set<std::string>& predicted, const std::set<std::string>& gold) {
  if (predicted.empty() && gold.empty()) return {1.0, 1.0, 1.0};
  if (predicted.empty() || gold.empty()) return {};
  std::size_t hit = 0;
  for (const auto& a : predicted) hit += gold.contains(a);
  F1Score s;
  s.precision = static_cast<double>(hit) / static_cast<double>(predicted.size());
  s.recall = static_cast<double>(hit) / static_cast<double>(gold.size());
  s.f1 = hit == 0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

double hits_at_1(const std::set<std::string>& predicted, const std::set<std::string>& gold, int trials,
                 std::uint64_t seed) {
  if (predicted.empty() || trials <= 0) return 0.0;
  std::vector<const std::string*> pool;
  for (const auto& a : predicted) pool.push_back(&a);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  int hits = 0;
  for (int i = 0; i < trials; ++i) hits += gold.contains(*pool[pick(rng)]);
  return static_cast<double>(hits) / static_cast<double>(trials);
}

namespace {

struct Accumulator {
  std::size_t count = 0;
  double em = 0.0;
  double f1 = 0.0;
  double hits = 0.0;

  void add(double e, double f, double h) {
    ++count;
    em += e;
    f1 += f;
    hits += h;
  }
  BucketScore finish() const {
    if (count == 0) return {};
    auto n = static_cast<double>(count);
    return {count, 100.0 * em / n, 100.0 * f1 / n, 100.0 * hits / n};
  }
};

nlohmann::json bucket_json(const BucketScore& b) {
  return {{"count", b.count}, {"em", b.em}, {"f1", b.f1}, {"hits@1", b.hits_at_1}};
}

}  // namespace

EvaluationReport evaluate_dataset(const std::vector<QAExample>& examples, const std::vector<Prediction>& predictions,
                                  std::uint64_t seed) {
  std::unordered_map<std::string, const Prediction*> by_id;
  for (const auto& p : predictions) by_id.emplace(p.question_id, &p);

  Accumulator overall;
  std::map<std::string, Accumulator> buckets;
  std::uint64_t index = 0;
  for (const auto& ex : examples) {
    auto it = by_id.find(ex.question_id);
    const Prediction* pred = it == by_id.end() ? nullptr : it->second;
    std::optional<LogicalForm> gold_form;
    if (ex.sexpr) gold_form = parse_sexpr(*ex.sexpr);

    double em = pred && pred->form && gold_form && exact_match(*pred->form, *gold_form) ? 1.0 : 0.0;
    double f1 = 0.0;
    double hits = 0.0;
    if (ex.answers) {
      std::set<std::string> gold(ex.answers->begin(), ex.answers->end());
      std::set<std::string> got;
      if (pred && pred->answers) got = pred->answers->as_strings();
      f1 = answer_f1(got, gold).f1;
      hits = hits_at_1(got, gold, 100, seed + index);
    }
    ++index;
    overall.add(em, f1, hits);
    if (gold_form) {
      buckets["function=" + std::string(to_string(function_class(*gold_form)))].add(em, f1, hits);
      buckets["relations=" + std::to_string(relation_count(*gold_form))].add(em, f1, hits);
    }
  }

  EvaluationReport report;
  report.overall = overall.finish();
  for (const auto& [key, acc] : buckets) report.buckets[key] = acc.finish();
  return report;
}

nlohmann::json EvaluationReport::to_json() const {
  nlohmann::json j;
  j["overall"] = bucket_json(overall);
  j["buckets"] = nlohmann::json::object();
  for (const auto& [key, b] : buckets) j["buckets"][key] = bucket_json(b);
  return j;
}

std::string EvaluationReport::to_text() const {
  std::ostringstream out;
  std::size_t width = 7;
  for (const auto& [key, b] : buckets) width = std::max(width, key.size());
  auto row = [&](const std::string& name, const BucketScore& b) {
    out << std::left << std::setw(static_cast<int>(width)) << name << std::right << std::setw(7) << b.count
        << std::fixed << std::setprecision(1) << std::setw(8) << b.em << std::setw(8) << b.f1 << std::setw(9)
        << b.hits_at_1 << '\n';
  };
  out << std::left << std::setw(static_cast<int>(width)) << "bucket" << std::right << std::setw(7) << "n"
      << std::setw(8) << "EM" << std::setw(8) << "F1" << std::setw(9) << "hits@1" << '\n';
  row("overall", overall);
  for (const auto& [key, b] : buckets) row(key, b);
  return out.str();
}

}  // namespace kbqa
