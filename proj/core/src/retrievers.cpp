#include "kbqa/retrievers.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "kbqa/error.hpp"
#include "kbqa/subprocess.hpp"
#include "kbqa/text.hpp"

namespace kbqa {
namespace {

std::set<std::string> stemmed_tokens(std::string_view text) {
  std::set<std::string> out;
  for (const auto& t : tokenize_text(text)) out.insert(stem(t));
  return out;
}

std::set<std::string> trigrams(std::string_view text) {
  std::string padded = " " + join(tokenize_text(text), " ") + " ";
  std::set<std::string> out;
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) out.insert(padded.substr(i, 3));
  return out;
}

std::string one_line(std::string_view text) {
  std::string out(text);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return out;
}

template <typename T, typename Key>
void sort_top_k(std::vector<T>& items, std::size_t k, Key key) {
  auto cmp = [&](const T& a, const T& b) {
    if (a.score != b.score) return a.score > b.score;
    return key(a) < key(b);
  };
  if (items.size() > k) {
    std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(k), items.end(), cmp);
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(k), items.end());
  } else {
    std::sort(items.begin(), items.end(), cmp);
  }
}

}  // namespace

Question Question::from_text(std::string text) {
  Question q;
  q.tokens = tokenize_text(text);
  q.text = std::move(text);
  return q;
}

// ---------------------------------------------------------------------------
// Scorers

LexicalScorer::LexicalScorer(const std::vector<std::string>& documents) {
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : documents)
    for (const auto& t : stemmed_tokens(doc)) ++df[t];
  auto n = static_cast<double>(documents.size());
  for (const auto& [token, count] : df) idf_[token] = std::log(1.0 + n / (1.0 + static_cast<double>(count)));
  unseen_idf_ = std::log(1.0 + n);
}

LexicalScorer LexicalScorer::from_store(const TripleStore& store) {
  std::vector<std::string> docs;
  for (const auto& item : store.catalog()) docs.push_back(item.name);
  for (const auto& id : store.entity_ids()) {
    if (const auto* meta = store.entity_meta(id); meta && !meta->label.empty()) docs.push_back(meta->label);
  }
  return LexicalScorer(docs);
}

double LexicalScorer::idf(const std::string& stemmed) const {
  if (idf_.empty()) return 1.0;
  auto it = idf_.find(stemmed);
  return it == idf_.end() ? unseen_idf_ : it->second;
}

double LexicalScorer::score(const Question& question, std::string_view candidate) const {
  std::set<std::string> q;
  for (const auto& t : question.tokens) q.insert(stem(t));
  auto c = stemmed_tokens(candidate);
  double overlap = 0.0;
  for (const auto& t : q)
    if (c.contains(t)) overlap += idf(t);

  auto qg = trigrams(question.text);
  auto cg = trigrams(candidate);
  std::size_t shared = 0;
  for (const auto& g : qg) shared += cg.contains(g);
  std::size_t uni = qg.size() + cg.size() - shared;
  double jaccard = uni == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(uni);
  return overlap + 0.1 * jaccard;
}

void TableScorer::set(std::string candidate, double value) { any_question_[std::move(candidate)] = value; }

void TableScorer::set(std::string question, std::string candidate, double value) {
  per_question_[{std::move(question), std::move(candidate)}] = value;
}

double TableScorer::score(const Question& question, std::string_view candidate) const {
  if (!per_question_.empty()) {
    auto it = per_question_.find({question.text, std::string(candidate)});
    if (it != per_question_.end()) return it->second;
  }
  auto it = any_question_.find(candidate);
  return it == any_question_.end() ? fallback_ : it->second;
}

ExternalScorer::ExternalScorer(std::string command, std::chrono::milliseconds timeout)
    : process_(std::make_unique<LineProcess>(std::move(command))), timeout_(timeout) {}

ExternalScorer::~ExternalScorer() = default;

double ExternalScorer::score(const Question& question, std::string_view candidate) const {
  std::lock_guard lock(mutex_);
  process_->write_line("SCORE\t" + one_line(question.text) + "\t" + one_line(candidate));
  auto reply = std::string(trim(process_->read_line(timeout_)));
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(reply.data(), reply.data() + reply.size(), value);
  if (ec != std::errc() || ptr != reply.data() + reply.size() || !std::isfinite(value))
    throw ScorerError("scorer process replied '" + reply + "', expected a real number");
  return value;
}

// ---------------------------------------------------------------------------
// Entity linking

std::vector<Mention> detect_mentions(const Question& question, const TripleStore& store, std::size_t max_len) {
  const auto& tokens = question.tokens;
  std::vector<Mention> hits;
  std::size_t longest = std::min(max_len, store.max_alias_tokens());
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    std::string surface;
    for (std::size_t end = start + 1; end <= tokens.size() && end - start <= longest; ++end) {
      if (end > start + 1) surface += ' ';
      surface += tokens[end - 1];
      if (!store.lookup_alias(surface).empty()) hits.push_back(Mention{start, end, surface});
    }
  }
  std::stable_sort(hits.begin(), hits.end(), [](const Mention& a, const Mention& b) {
    if (a.end - a.start != b.end - b.start) return a.end - a.start > b.end - b.start;
    return a.start < b.start;
  });
  std::vector<Mention> kept;
  for (auto& m : hits) {
    bool overlaps = std::any_of(kept.begin(), kept.end(),
                                [&](const Mention& k) { return m.start < k.end && k.start < m.end; });
    if (!overlaps) kept.push_back(std::move(m));
  }
  std::sort(kept.begin(), kept.end(), [](const Mention& a, const Mention& b) { return a.start < b.start; });
  return kept;
}

std::vector<EntityCandidate> generate_candidates(const Mention& mention, const TripleStore& store) {
  std::vector<EntityCandidate> out;
  for (const auto& hit : store.lookup_alias(mention.surface)) out.push_back({hit.entity, hit.popularity});
  return out;
}

std::string entity_context(const EntityId& entity, const TripleStore& store) {
  std::vector<std::string> parts{store.label_of(entity)};
  for (const auto& r : store.entity_relations(entity))
    if (r != store.type_relation()) parts.push_back(r);
  return join(parts, " ");
}

LinkedEntity disambiguate(const Question& question, const Mention& mention,
                          const std::vector<EntityCandidate>& candidates, const TripleStore& store,
                          const Scorer& scorer) {
  if (candidates.empty()) throw DataError("no candidate entities for mention '" + mention.surface + "'");
  const EntityCandidate* best = nullptr;
  double best_score = 0.0;
  for (const auto& c : candidates) {
    double s = scorer.score(question, entity_context(c.entity, store));
    bool better = !best || s > best_score ||
                  (s == best_score && (c.popularity > best->popularity ||
                                       (c.popularity == best->popularity && c.entity < best->entity)));
    if (better) {
      best = &c;
      best_score = s;
    }
  }
  return LinkedEntity{mention, best->entity, best_score};
}

std::vector<LinkedEntity> link_entities(const Question& question, const TripleStore& store, const Scorer& scorer,
                                        std::size_t max_len) {
  std::vector<LinkedEntity> out;
  for (const auto& m : detect_mentions(question, store, max_len)) {
    auto candidates = generate_candidates(m, store);
    if (!candidates.empty()) out.push_back(disambiguate(question, m, candidates, store, scorer));
  }
  return out;
}

std::vector<LiteralValue> question_literals(const Question& question, const TripleStore& store) {
  std::vector<LiteralValue> out;
  std::set<std::string> seen;
  for (const auto& t : question.tokens) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) continue;
    auto lit = LiteralValue::from_double(value);
    if (!store.find_node(Term(lit))) continue;
    if (seen.insert(lit.value_key()).second) out.push_back(lit);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schema and ELF ranking

SchemaRetrieval retrieve_schema(const Question& question, const TripleStore& store, const Scorer& class_scorer,
                                const Scorer& relation_scorer, std::size_t k) {
  SchemaRetrieval out;
  for (const auto& item : store.catalog()) {
    if (item.kind == SchemaKind::Class)
      out.classes.push_back({item.name, class_scorer.score(question, item.name)});
    else
      out.relations.push_back({item.name, relation_scorer.score(question, item.name)});
  }
  auto name = [](const ScoredItem& s) -> const std::string& { return s.name; };
  sort_top_k(out.classes, k, name);
  sort_top_k(out.relations, k, name);
  return out;
}

SchemaRetrieval retrieve_schema(const Question& question, const TripleStore& store, const Scorer& scorer,
                                std::size_t k) {
  return retrieve_schema(question, store, scorer, scorer, k);
}

std::vector<ScoredForm> rank_elfs(const Question& question, const std::vector<LogicalForm>& elfs,
                                  const Scorer& scorer, std::size_t k) {
  std::vector<ScoredForm> out;
  out.reserve(elfs.size());
  for (const auto& f : elfs) {
    auto text = print_canonical(f);
    double s = scorer.score(question, text);
    out.push_back(ScoredForm{f, std::move(text), s});
  }
  sort_top_k(out, k, [](const ScoredForm& f) -> const std::string& { return f.text; });
  return out;
}

double ranker_loss(const std::vector<double>& scores, std::size_t target_index) {
  if (target_index >= scores.size()) throw std::out_of_range("ranker_loss: target index out of range");
  double peak = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - peak);
  double log_prob = scores[target_index] - peak - std::log(sum);
  return -std::exp(log_prob);
}

}  // namespace kbqa
