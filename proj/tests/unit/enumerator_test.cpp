#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "kbqa/enumerator.hpp"
#include "kbqa/executor.hpp"
#include "oracle.hpp"
#include "random_kb.hpp"

namespace kbqa {
namespace {

std::set<std::string> prints(const std::vector<LogicalForm>& forms) {
  std::set<std::string> out;
  for (const auto& f : forms) out.insert(print_canonical(f));
  return out;
}

std::vector<StartPoint> all_entity_starts(const TripleStore& store) {
  std::vector<StartPoint> starts;
  for (const auto& id : store.entity_ids())
    if (!looks_like_class(id)) starts.push_back(StartPoint::entity(id));
  return starts;
}

TEST(EnumeratorTest, ToyEntityStart) {
  auto store = test::toy_kb();
  auto out = prints(enumerate_elfs({StartPoint::entity("e1")}, store));
  EXPECT_TRUE(out.count("(JOIN ms.length_units e1)"));
  EXPECT_TRUE(out.count(print_canonical(parse_sexpr("(AND ms.system (JOIN ms.length_units e1))"))));
  EXPECT_EQ(evaluate(parse_sexpr("(JOIN ms.length_units e1)"), store), AnswerSet::entities({"sys1"}));
  EXPECT_EQ(out, test::completeness_oracle({StartPoint::entity("e1")}, store));
}

TEST(EnumeratorTest, ToyLiteralStart) {
  auto store = test::toy_kb();
  auto start = StartPoint::literal(LiteralValue::from_double(100.0, "float"));
  auto out = prints(enumerate_elfs({start}, store));
  EXPECT_TRUE(out.count("(JOIN sf.chamber_pressure 100.0^^float)"));
  EXPECT_EQ(evaluate(parse_sexpr("(JOIN sf.chamber_pressure 100.0^^float)"), store), AnswerSet::entities({"eng1"}));
  EXPECT_EQ(out, test::completeness_oracle({start}, store));
}

TEST(EnumeratorTest, EmptyAndAbsentStarts) {
  auto store = test::toy_kb();
  EXPECT_TRUE(enumerate_elfs({}, store).empty());
  EXPECT_TRUE(enumerate_elfs({StartPoint::entity("nobody")}, store).empty());
  EXPECT_THROW(enumerate_elfs({}, store, EnumConfig{.hop_limit = 3}), std::invalid_argument);
}

TEST(EnumeratorTest, TypeRelationIsNotWalked) {
  auto store = test::toy_kb();
  for (const auto& f : enumerate_elfs(all_entity_starts(store), store)) {
    auto relations = collect_symbols(f).relations;
    EXPECT_EQ(std::count(relations.begin(), relations.end(), "type_rel"), 0) << print_sexpr(f);
  }
}

TEST(EnumeratorTest, TruncationKeepsDeterministicPrefix) {
  auto store = test::toy_kb();
  auto starts = all_entity_starts(store);
  auto full = enumerate_elfs(starts, store);
  ASSERT_GT(full.size(), 3u);
  auto cut = enumerate_elfs(starts, store, EnumConfig{.max_candidates = 3});
  ASSERT_EQ(cut.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(cut[i], full[i]);
  for (std::size_t i = 1; i < full.size(); ++i) {
    auto a = std::make_pair(relation_count(full[i - 1]), print_sexpr(full[i - 1]));
    auto b = std::make_pair(relation_count(full[i]), print_sexpr(full[i]));
    EXPECT_LT(a, b);
  }
}

TEST(EnumeratorTest, WithoutClassConstraint) {
  auto store = test::toy_kb();
  EnumConfig config{.include_class_constraint = false};
  for (const auto& f : enumerate_elfs(all_entity_starts(store), store, config)) EXPECT_NE(f.kind(), ExprKind::And);
  EXPECT_EQ(prints(enumerate_elfs(all_entity_starts(store), store, config)),
            test::completeness_oracle(all_entity_starts(store), store, config));
}

class EnumeratorPropertyTest : public ::testing::TestWithParam<int> {};

TEST_P(EnumeratorPropertyTest, InvariantsAndOracleEquality) {
  std::mt19937_64 rng(GetParam());
  auto store = test::random_store(rng, 5 + GetParam() % 26);
  auto starts = all_entity_starts(store);
  starts.resize(std::min<std::size_t>(starts.size(), 4));
  starts.push_back(StartPoint::literal(LiteralValue::from_double(1.0)));

  auto two = enumerate_elfs(starts, store);
  auto one = enumerate_elfs(starts, store, EnumConfig{.hop_limit = 1});
  auto two_prints = prints(two);
  EXPECT_EQ(two_prints.size(), two.size());
  EXPECT_EQ(two_prints, test::completeness_oracle(starts, store));
  EXPECT_EQ(prints(one), test::completeness_oracle(starts, store, EnumConfig{.hop_limit = 1}));
  for (const auto& p : prints(one)) EXPECT_TRUE(two_prints.count(p)) << p;

  std::set<std::string> anchors;
  for (const auto& s : starts) anchors.insert(term_to_string(s.value));
  for (const auto& f : two) {
    auto text = print_sexpr(f);
    EXPECT_EQ(parse_sexpr(text), f);
    EXPECT_TRUE(validate_schema(f, store).empty()) << text;
    EXPECT_FALSE(evaluate(f, store).empty()) << text;
    EXPECT_LE(relation_count(f), 2u);
    auto symbols = collect_symbols(f);
    std::size_t anchored = 0;
    for (const auto& e : symbols.entities) anchored += anchors.count(e);
    for (const auto& l : symbols.literals) anchored += anchors.count(l.to_string());
    EXPECT_EQ(anchored, 1u) << text;
  }
}

INSTANTIATE_TEST_SUITE_P(RandomStores, EnumeratorPropertyTest, ::testing::Range(0, 50));

}  // namespace
}  // namespace kbqa
