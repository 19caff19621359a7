#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "kbqa/dataset_io.hpp"
#include "kbqa/enumerator.hpp"
#include "kbqa/error.hpp"
#include "kbqa/metrics.hpp"
#include "kbqa/pipeline.hpp"
#include "kbqa/synthetic.hpp"
#include "kbqa/token_scorers.hpp"

namespace kbqa {
namespace {

const char* kEmptyForm = "(AND measurement_unit.unit_of_length measurement_unit.unit_of_resistivity)";

class ThrowingScorer : public TokenScorer {
 public:
  explicit ThrowingScorer(std::size_t v) : v_(v) {}
  std::vector<double> next_log_probs(std::span<const TokenId>, std::span<const TokenId>) const override {
    throw ScorerError("generator went away");
  }
  std::size_t vocab_size() const override { return v_; }

 private:
  std::size_t v_;
};

class PipelineTest : public ::testing::Test {
 protected:
  PipelineTest() : store_(test::desk_kb()), engine_(store_), lexical_(LexicalScorer::from_store(store_)) {
    for (const auto& q : test::desk_questions()) questions_[q.question_id] = q;
  }

  std::vector<TokenId> target(const std::string& sexpr) const {
    auto tokens = engine_.vocabulary().encode_form(parse_sexpr(sexpr));
    tokens.push_back(Vocabulary::kEnd);
    return tokens;
  }

  ScorerSet scorers(const TokenScorer& generator, const Scorer* elf = nullptr) const {
    return ScorerSet{&lexical_, elf ? elf : &lexical_, &lexical_, &lexical_, &generator};
  }

  TripleStore store_;
  Engine engine_;
  LexicalScorer lexical_;
  std::map<std::string, QAExample> questions_;
};

TEST_F(PipelineTest, GoldOracleIsGeneratedAtRankZero) {
  for (const auto& [id, q] : questions_) {
    OracleScorer oracle(engine_.vocabulary().size(), target(*q.sexpr), 0.0);
    auto p = engine_.predict(q, scorers(oracle));
    EXPECT_EQ(p.provenance, Provenance::Generated) << id;
    EXPECT_EQ(p.beam_rank, std::optional<std::size_t>(0)) << id;
    EXPECT_TRUE(exact_match(p.sexpr, *q.sexpr)) << id << " " << p.sexpr;
    ASSERT_TRUE(p.answers) << id;
    auto got = p.answers->as_strings();
    EXPECT_EQ(got, std::set<std::string>(q.answers->begin(), q.answers->end())) << id;
    EXPECT_TRUE(p.errors.empty()) << id;
  }
}

TEST_F(PipelineTest, EmptyTopHypothesisIsSkipped) {
  const auto& q = questions_.at("d01");
  OracleScorer oracle(engine_.vocabulary().size(),
                      {OracleScorer::Target{target(kEmptyForm), 0.6}, OracleScorer::Target{target(*q.sexpr), 0.4}},
                      0.0);
  auto p = engine_.predict(q, scorers(oracle));
  ASSERT_GE(p.beam.size(), 2u);
  EXPECT_EQ(p.beam[0], kEmptyForm);
  EXPECT_EQ(p.provenance, Provenance::Generated);
  EXPECT_EQ(p.beam_rank, std::optional<std::size_t>(1));
  EXPECT_TRUE(exact_match(p.sexpr, *q.sexpr));
}

TEST_F(PipelineTest, FallsBackToRankedExemplaryForm) {
  const auto& q = questions_.at("d01");
  OracleScorer oracle(engine_.vocabulary().size(), target(kEmptyForm), 0.0);
  TableScorer elf_table(0.0);
  elf_table.set(print_canonical(parse_sexpr(*q.sexpr)), 10.0);
  auto p = engine_.predict(q, scorers(oracle, &elf_table));
  EXPECT_EQ(p.provenance, Provenance::ElfFallback);
  EXPECT_EQ(p.elf_rank, std::optional<std::size_t>(0));
  EXPECT_FALSE(p.beam_rank);
  EXPECT_TRUE(exact_match(p.sexpr, *q.sexpr));
  EXPECT_EQ(p.answers->as_strings(), std::set<std::string>{"m.0metric"});
}

TEST_F(PipelineTest, NothingValidGivesNone) {
  QAExample q{"x1", "which one of these is it", std::nullopt, std::nullopt};
  OracleScorer oracle(engine_.vocabulary().size(), target(kEmptyForm), 0.0);
  auto p = engine_.predict(q, scorers(oracle));
  EXPECT_TRUE(p.linked_entities.empty());
  EXPECT_EQ(p.provenance, Provenance::None);
  EXPECT_FALSE(p.form);
  EXPECT_FALSE(p.answers);
  EXPECT_TRUE(p.sexpr.empty());
  EXPECT_EQ(p.beam, std::vector<std::string>{kEmptyForm});
}

TEST_F(PipelineTest, GeneratorFailureIsRecordedAndFallsBack) {
  const auto& q = questions_.at("d06");
  ThrowingScorer broken(engine_.vocabulary().size());
  auto p = engine_.predict(q, scorers(broken));
  EXPECT_TRUE(p.scorer_failure);
  ASSERT_EQ(p.errors.size(), 1u);
  EXPECT_EQ(p.errors[0].rfind("generate: ", 0), 0u);
  EXPECT_EQ(p.provenance, Provenance::ElfFallback);
}

TEST_F(PipelineTest, BeamOrderAuditAndTimings) {
  for (const auto& [id, q] : questions_) {
    NgramScorer ngram(engine_.vocabulary().size(), {target(*q.sexpr)}, 2);
    auto p = engine_.predict(q, scorers(ngram));
    std::vector<std::string> stages;
    for (const auto& t : p.timings) stages.push_back(t.stage);
    EXPECT_EQ(stages, (std::vector<std::string>{"link", "enumerate", "rank", "schema", "context", "generate",
                                                "validate"}));
    if (p.provenance != Provenance::Generated) continue;
    for (std::size_t i = 0; i < *p.beam_rank; ++i) EXPECT_FALSE(is_valid_prediction(p.beam[i], store_)) << id;
    EXPECT_EQ(print_sexpr(canonicalize(parse_sexpr(p.beam[*p.beam_rank]))), p.sexpr);
  }
}

TEST_F(PipelineTest, DeterministicAndParallelAgree) {
  std::vector<QAExample> all;
  for (const auto& [id, q] : questions_) all.push_back(q);
  NgramScorer ngram(engine_.vocabulary().size(), {target(*all[0].sexpr), target(*all[3].sexpr)}, 3);
  auto serial = engine_.predict_all(all, scorers(ngram), 1);
  auto parallel = engine_.predict_all(all, scorers(ngram), 4);
  ASSERT_EQ(serial.size(), all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(serial[i].question_id, all[i].question_id);
    EXPECT_EQ(serial[i].sexpr, parallel[i].sexpr);
    EXPECT_EQ(serial[i].beam, parallel[i].beam);
    EXPECT_EQ(serial[i].provenance, parallel[i].provenance);
  }
}

TEST_F(PipelineTest, MissingScorerIsRejected) {
  UniformScorer u(engine_.vocabulary().size());
  ScorerSet s = scorers(u);
  s.elf = nullptr;
  EXPECT_THROW(engine_.predict(questions_.at("d01"), s), std::invalid_argument);
}

TEST_F(PipelineTest, ContextSectionsAndBudget) {
  PipelineConfig config;
  config.keep_context = true;
  Engine engine(store_, config);
  const auto& q = questions_.at("d02");
  UniformScorer u(engine.vocabulary().size());
  auto p = engine.predict(q, scorers(u));
  ASSERT_TRUE(p.context);
  const auto& ctx = *p.context;
  EXPECT_EQ(ctx.entities, (std::vector<std::pair<std::string, EntityId>>{{"liquid oxygen", "m.01tm_5"}}));
  auto text = ctx.text();
  auto e = text.find("<entities>"), f = text.find("<elfs>"), s = text.find("<schema>");
  ASSERT_NE(e, std::string::npos);
  EXPECT_LT(e, f);
  EXPECT_LT(f, s);
  EXPECT_EQ(text.rfind(q.question, 0), 0u);
  EXPECT_NE(text.find("(liquid oxygen, m.01tm_5)"), std::string::npos);
  EXPECT_LE(ctx.elfs.size(), config.top_elf);
  EXPECT_EQ(ctx.classes.size(), std::min(config.top_schema, store_.class_names().size()));
  EXPECT_LE(ctx.tokens.size(), config.input_budget);

  auto question = Question::from_text(q.question);
  LinkedEntity link{{0, 1, "lox"}, "m.01tm_5", 1.0};
  auto schema = retrieve_schema(question, store_, lexical_, 10);
  std::size_t previous_items = std::numeric_limits<std::size_t>::max();
  for (std::size_t budget : {1000u, 60u, 40u, 25u, 5u, 0u}) {
    auto small = assemble_context(question, {link, link}, {}, schema, store_, engine.vocabulary(), budget);
    EXPECT_LE(small.tokens.size(), budget) << budget;
    std::size_t items = small.entities.size() + small.classes.size() + small.relations.size();
    EXPECT_LE(items, previous_items);
    EXPECT_LE(small.entities.size(), 1u);
    previous_items = items;
    // Sections are dropped from the tail: relations go before classes.
    if (!small.relations.empty()) EXPECT_EQ(small.classes.size(), schema.classes.size());
  }
}

TEST(MetricsTest, F1Conventions) {
  using S = std::set<std::string>;
  auto both_empty = answer_f1(S{}, S{});
  EXPECT_EQ(both_empty.f1, 1.0);
  EXPECT_EQ(answer_f1(S{"a"}, S{}).f1, 0.0);
  EXPECT_EQ(answer_f1(S{}, S{"a"}).f1, 0.0);
  auto half = answer_f1(S{"a", "b"}, S{"a"});
  EXPECT_DOUBLE_EQ(half.precision, 0.5);
  EXPECT_DOUBLE_EQ(half.recall, 1.0);
  EXPECT_DOUBLE_EQ(half.f1, 2.0 / 3.0);
  EXPECT_EQ(answer_f1(S{"x"}, S{"y"}).f1, 0.0);
}

TEST(MetricsTest, F1IsSymmetricAndBounded) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    std::set<std::string> a, b;
    for (int k = 0; k < 6; ++k) {
      if (rng() % 2) a.insert(std::to_string(rng() % 8));
      if (rng() % 2) b.insert(std::to_string(rng() % 8));
    }
    auto ab = answer_f1(a, b), ba = answer_f1(b, a);
    EXPECT_DOUBLE_EQ(ab.f1, ba.f1);
    EXPECT_DOUBLE_EQ(ab.precision, ba.recall);
    EXPECT_GE(ab.f1, 0.0);
    EXPECT_LE(ab.f1, 1.0);
    EXPECT_EQ(ab.f1 == 1.0, a == b);
  }
}

TEST(MetricsTest, HitsAtOne) {
  using S = std::set<std::string>;
  EXPECT_EQ(hits_at_1(S{"a"}, S{"a"}), 1.0);
  EXPECT_EQ(hits_at_1(S{}, S{"a"}), 0.0);
  EXPECT_EQ(hits_at_1(S{"b", "c"}, S{"a"}), 0.0);
  EXPECT_NEAR(hits_at_1(S{"a", "b"}, S{"a"}, 20000, 9), 0.5, 0.02);
  EXPECT_NEAR(hits_at_1(S{"a", "b", "c", "d"}, S{"a"}, 20000, 9), 0.25, 0.02);
  EXPECT_EQ(hits_at_1(S{"a", "b"}, S{"a"}, 100, 4), hits_at_1(S{"a", "b"}, S{"a"}, 100, 4));
}

TEST(MetricsTest, ExactMatchIsCanonical) {
  EXPECT_TRUE(exact_match("(AND (JOIN r.x e1) (JOIN r.y e2))", "(AND (JOIN r.y e2) (JOIN r.x e1))"));
  EXPECT_FALSE(exact_match("(JOIN r.x e1)", "(JOIN r.x e2)"));
  EXPECT_FALSE(exact_match("(JOIN r.x", "(JOIN r.x e2)"));
}

Prediction prediction(const std::string& id, const std::string& sexpr, std::set<std::string> answers) {
  Prediction p;
  p.question_id = id;
  if (!sexpr.empty()) {
    p.form = parse_sexpr(sexpr);
    p.sexpr = sexpr;
    p.answers = AnswerSet::entities(std::vector<std::string>(answers.begin(), answers.end()));
  }
  return p;
}

TEST(MetricsTest, HandComputedReport) {
  std::vector<QAExample> examples{
      {"q1", "", "(JOIN r.x e1)", std::vector<std::string>{"a"}},
      {"q2", "", "(COUNT (JOIN r.x e1))", std::vector<std::string>{"1"}},
      {"q3", "", "(ARGMAX c.k r.size)", std::vector<std::string>{"a", "b"}},
      {"q4", "", "(AND c.k (JOIN r.y (JOIN r.x e2)))", std::vector<std::string>{"c"}},
  };
  std::vector<Prediction> predictions{
      prediction("q1", "(JOIN r.x e1)", {"a"}),
      prediction("q2", "(COUNT (JOIN r.x e3))", {"2"}),
      prediction("q3", "(ARGMAX c.k r.size)", {"a"}),
  };
  auto report = evaluate_dataset(examples, predictions);
  // EM: q1, q3. F1: 1, 0, 2/3, 0.
  EXPECT_EQ(report.overall.count, 4u);
  EXPECT_DOUBLE_EQ(report.overall.em, 50.0);
  EXPECT_NEAR(report.overall.f1, 100.0 * (1.0 + 2.0 / 3.0) / 4.0, 1e-9);
  EXPECT_NEAR(report.overall.hits_at_1, 50.0, 1e-9);
  EXPECT_EQ(report.buckets.at("function=none").count, 2u);
  EXPECT_DOUBLE_EQ(report.buckets.at("function=none").em, 50.0);
  EXPECT_EQ(report.buckets.at("function=count").count, 1u);
  EXPECT_DOUBLE_EQ(report.buckets.at("function=count").f1, 0.0);
  EXPECT_DOUBLE_EQ(report.buckets.at("function=superlative").em, 100.0);
  EXPECT_EQ(report.buckets.at("relations=1").count, 3u);
  EXPECT_EQ(report.buckets.at("relations=2").count, 1u);
  EXPECT_FALSE(report.buckets.contains("function=comparative"));
  auto j = report.to_json();
  EXPECT_EQ(j["overall"]["count"], 4);
  EXPECT_NE(report.to_text().find("function=superlative"), std::string::npos);
}

TEST(MetricsTest, EmptyDataset) {
  auto report = evaluate_dataset({}, {});
  EXPECT_EQ(report.overall.count, 0u);
  EXPECT_EQ(report.overall.f1, 0.0);
  EXPECT_TRUE(report.buckets.empty());
}

TEST(DatasetIoTest, RoundTrip) {
  auto examples = test::desk_questions();
  examples.push_back({"bare", "no gold here", std::nullopt, std::nullopt});
  std::stringstream buffer;
  write_examples(examples, buffer);
  auto back = read_examples(buffer);
  ASSERT_EQ(back.size(), examples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].question_id, examples[i].question_id);
    EXPECT_EQ(back[i].question, examples[i].question);
    EXPECT_EQ(back[i].sexpr, examples[i].sexpr);
    EXPECT_EQ(back[i].answers, examples[i].answers);
  }
}

TEST(DatasetIoTest, ErrorsCarryLineNumbers) {
  std::stringstream in("{\"qid\": \"a\", \"question\": \"x\"}\n\n{\"qid\": \"b\"\n");
  try {
    read_examples(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_TRUE(e.is_line());
    EXPECT_EQ(e.position(), 3u);
  }
  std::stringstream missing("{\"question\": \"x\"}\n");
  EXPECT_THROW(read_examples(missing), ParseError);
}

TEST(DatasetIoTest, PredictionJson) {
  auto p = prediction("q1", "(JOIN r.x e1)", {"a"});
  p.provenance = Provenance::Generated;
  p.beam_rank = 0;
  auto j = to_json(p);
  EXPECT_EQ(j["qid"], "q1");
  EXPECT_EQ(j["sexpr"], "(JOIN r.x e1)");
  EXPECT_EQ(j["provenance"], "generated");
  EXPECT_EQ(j["answers"], nlohmann::json::array({"a"}));
}

TEST(SyntheticTest, DeterministicAndGoldConsistent) {
  SyntheticConfig config;
  config.entities = 200;
  config.questions = 30;
  auto a = make_synthetic_kb(config);
  auto b = make_synthetic_kb(config);
  EXPECT_EQ(a.store.triple_count(), b.store.triple_count());
  ASSERT_EQ(a.questions.size(), 30u);
  for (std::size_t i = 0; i < a.questions.size(); ++i) {
    const auto& q = a.questions[i];
    EXPECT_EQ(q.question, b.questions[i].question);
    auto form = parse_sexpr(*q.sexpr);
    EXPECT_TRUE(validate_schema(form, a.store).empty()) << *q.sexpr;
    auto answers = evaluate(form, a.store).as_strings();
    EXPECT_EQ(answers, std::set<std::string>(q.answers->begin(), q.answers->end())) << *q.sexpr;
    auto question = Question::from_text(q.question);
    EXPECT_FALSE(detect_mentions(question, a.store).empty()) << q.question;
  }
  (void)Vocabulary::for_store(a.store);
}

TEST_F(PipelineTest, GeneratedPredictionsAreValidAndRunsAreIdentical) {
  for (const auto& [id, q] : questions_) {
    NgramScorer ngram(engine_.vocabulary().size(), {target(*q.sexpr)}, 3);
    auto a = engine_.predict(q, scorers(ngram));
    auto b = engine_.predict(q, scorers(ngram));
    if (a.provenance == Provenance::Generated) EXPECT_TRUE(is_valid_prediction(*a.form, store_)) << id;
    auto ja = to_json(a), jb = to_json(b);
    ja.erase("timing_ms");
    jb.erase("timing_ms");
    EXPECT_EQ(ja.dump(), jb.dump()) << id;
  }
}

TEST(PipelineEdgeTest, EmptyStoreGivesNone) {
  auto store = StoreBuilder().freeze();
  Engine engine(store);
  LexicalScorer lexical;
  UniformScorer uniform(engine.vocabulary().size());
  auto p = engine.predict({"e", "anything at all", std::nullopt, std::nullopt},
                          ScorerSet{&lexical, &lexical, &lexical, &lexical, &uniform});
  EXPECT_EQ(p.provenance, Provenance::None);
  EXPECT_FALSE(p.answers);
}

TEST(ContextTest, LabelThenIdPairs) {
  StoreBuilder b;
  b.add_triple("m.0l2l_", "biology.organism.genus", EntityId("m.0genus"));
  b.add_label("m.0l2l_", "trouty");
  b.add_alias("trouty", "m.0l2l_", 1.0);
  auto store = std::move(b).freeze();
  auto vocab = Vocabulary::for_store(store);
  auto q = Question::from_text("what genus is trouty in");
  LexicalScorer lexical;
  auto links = link_entities(q, store, lexical);
  ASSERT_EQ(links.size(), 1u);
  auto ctx = assemble_context(q, links, {}, retrieve_schema(q, store, lexical), store, vocab);
  EXPECT_NE(ctx.text().find("<entities> (trouty, m.0l2l_) <elfs>"), std::string::npos) << ctx.text();
  auto trouty = vocab.find(TokenKind::Entity, "m.0l2l_");
  ASSERT_TRUE(trouty);
  EXPECT_NE(std::find(ctx.tokens.begin(), ctx.tokens.end(), *trouty), ctx.tokens.end());
}

TEST(ContextTest, NoEntityPath) {
  auto store = test::toy_kb();
  auto vocab = Vocabulary::for_store(store);
  auto q = Question::from_text("what is the biggest engine");
  LexicalScorer lexical;
  auto schema = retrieve_schema(q, store, lexical, 2);
  auto ctx = assemble_context(q, {}, {}, schema, store, vocab);
  auto text = ctx.text();
  EXPECT_EQ(text.rfind("what is the biggest engine <entities> <elfs> <schema> ", 0), 0u) << text;
  EXPECT_EQ(ctx.classes.size() + ctx.relations.size(), 4u);
}

TEST(ContextTest, ManyFormsAreCutFromTheTail) {
  auto store = test::desk_kb();
  auto vocab = Vocabulary::for_store(store);
  auto q = Question::from_text("name the system that has decimetre as a measurement unit");
  std::vector<StartPoint> starts;
  for (const auto& id : store.entity_ids())
    if (!looks_like_class(id)) starts.push_back(StartPoint::entity(id));
  auto elfs = enumerate_elfs(starts, store);
  ASSERT_GE(elfs.size(), 50u);
  LexicalScorer lexical;
  auto ranked = rank_elfs(q, elfs, lexical, 50);
  auto full = assemble_context(q, {}, ranked, retrieve_schema(q, store, lexical), store, vocab, 100000);
  ASSERT_EQ(full.elfs.size(), 50u);
  for (std::size_t budget : {1000u, 300u}) {
    auto ctx = assemble_context(q, {}, ranked, retrieve_schema(q, store, lexical), store, vocab, budget);
    EXPECT_LE(ctx.tokens.size(), budget);
    EXPECT_LT(ctx.elfs.size(), 50u);
    EXPECT_TRUE(std::equal(ctx.elfs.begin(), ctx.elfs.end(), full.elfs.begin()));
    EXPECT_TRUE(ctx.classes.empty());
  }
}

TEST(MetricsTest, OverlapExample) {
  auto s = answer_f1({"a", "b"}, {"b", "c"});
  EXPECT_DOUBLE_EQ(s.precision, 0.5);
  EXPECT_DOUBLE_EQ(s.recall, 0.5);
  EXPECT_DOUBLE_EQ(s.f1, 0.5);
}

TEST(MetricsTest, PerfectPredictionsFillEveryBucket) {
  auto store = test::desk_kb();
  auto examples = test::desk_questions();
  std::vector<Prediction> predictions;
  for (const auto& q : examples) {
    Prediction p;
    p.question_id = q.question_id;
    p.form = parse_sexpr(*q.sexpr);
    p.sexpr = *q.sexpr;
    p.answers = evaluate(*p.form, store);
    predictions.push_back(p);
  }
  auto report = evaluate_dataset(examples, predictions);
  EXPECT_EQ(report.overall.em, 100.0);
  for (const auto& [key, b] : report.buckets) {
    EXPECT_EQ(b.em, 100.0) << key;
    EXPECT_EQ(b.f1, 100.0) << key;
  }
}

}  // namespace
}  // namespace kbqa
