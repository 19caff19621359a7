#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "kbqa/error.hpp"
#include "kbqa/executor.hpp"
#include "kbqa/sexpr.hpp"
#include "random_kb.hpp"

namespace kbqa {
namespace {

const char* kDecimetreSystem =
    "(AND measurement_unit.measurement_system (JOIN measurement_unit.measurement_system.length_units m.01p5ld))";
const char* kLoxEngine =
    "(AND spaceflight.bipropellant_rocket_engine (AND (JOIN spaceflight.bipropellant_rocket_engine.oxidizer "
    "m.01tm_5) (lt spaceflight.bipropellant_rocket_engine.chamber_pressure 257.0^^float)))";
const char* kSmallestResistivity =
    "(ARGMIN measurement_unit.unit_of_resistivity measurement_unit.unit_of_resistivity.resistivity_in_ohm_meters)";

TEST(SexprParseTest, JoinUnderClassShape) {
  auto f = parse_sexpr(kDecimetreSystem);
  ASSERT_EQ(f.kind(), ExprKind::And);
  EXPECT_EQ(f.child(0).kind(), ExprKind::Class);
  EXPECT_EQ(f.child(0).symbol(), "measurement_unit.measurement_system");
  const auto& join = f.child(1);
  ASSERT_EQ(join.kind(), ExprKind::Join);
  EXPECT_EQ(join.symbol(), "measurement_unit.measurement_system.length_units");
  EXPECT_FALSE(join.reversed());
  EXPECT_EQ(join.child(0).kind(), ExprKind::Entity);
  EXPECT_EQ(join.child(0).symbol(), "m.01p5ld");
}

TEST(SexprParseTest, SuperlativeShape) {
  auto f = parse_sexpr(kSmallestResistivity);
  ASSERT_EQ(f.kind(), ExprKind::ArgMin);
  EXPECT_EQ(f.child(0).kind(), ExprKind::Class);
  EXPECT_EQ(f.symbol(), "measurement_unit.unit_of_resistivity.resistivity_in_ohm_meters");
}

TEST(SexprParseTest, ComparativeShape) {
  auto f = parse_sexpr("(lt sf.chamber_pressure 257.0^^float)");
  ASSERT_EQ(f.kind(), ExprKind::Compare);
  EXPECT_EQ(f.op(), CompareOp::Lt);
  EXPECT_EQ(f.symbol(), "sf.chamber_pressure");
  EXPECT_EQ(f.literal_value(), LiteralValue::from_double(257.0, "float"));
}

TEST(SexprParseTest, ReverseAndCount) {
  auto f = parse_sexpr("(COUNT (JOIN (R a.b) e1))");
  ASSERT_EQ(f.kind(), ExprKind::Count);
  EXPECT_TRUE(f.child(0).reversed());
  EXPECT_EQ(print_sexpr(f), "(COUNT (JOIN (R a.b) e1))");
}

TEST(SexprParseTest, ErrorsArePositioned) {
  try {
    parse_sexpr("(JOIN r");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 7u);
    EXPECT_FALSE(e.is_line());
  }
  EXPECT_THROW(parse_sexpr("(JOIN a.b e1))"), ParseError);
  EXPECT_THROW(parse_sexpr("(OR a.b c.d)"), ParseError);
  EXPECT_THROW(parse_sexpr("(AND a.b)"), ParseError);
  EXPECT_THROW(parse_sexpr("(AND a.b c.d e.f)"), ParseError);
  EXPECT_THROW(parse_sexpr("(lt a.b x^^float)"), ParseError);
  EXPECT_THROW(parse_sexpr("(lt a.b \"red\")"), ParseError);
  EXPECT_THROW(parse_sexpr(""), ParseError);
  EXPECT_THROW(parse_sexpr("(AND (COUNT a.b) c.d)"), ParseError);
}

TEST(SexprParseTest, EveryOtherHeadIsRejected) {
  for (const char* head : {"and", "Join", "MIN", "eq", "R", "VALUES", "ne"}) {
    std::string text = std::string("(") + head + " a.b e1)";
    EXPECT_THROW(parse_sexpr(text), ParseError) << text;
  }
}

TEST(SexprPrintTest, TableStringsRePrintCanonically) {
  for (const char* s : {kDecimetreSystem, kLoxEngine, kSmallestResistivity}) {
    auto f = parse_sexpr(s);
    auto canonical = print_canonical(f);
    EXPECT_EQ(print_canonical(parse_sexpr(canonical)), canonical);
    EXPECT_EQ(print_sexpr(f), s);
  }
}

TEST(SexprPrintTest, AndIsCommutativeAfterCanonicalization) {
  auto a = parse_sexpr("(AND x.y (JOIN r.s e1))");
  auto b = parse_sexpr("(AND (JOIN r.s e1) x.y)");
  EXPECT_EQ(print_canonical(a), print_canonical(b));
  EXPECT_EQ(print_canonical(a), "(AND (JOIN r.s e1) x.y)");
}

TEST(SexprPrintTest, NestedAndStableUnderReordering) {
  const char* reordered =
      "(AND (AND (lt spaceflight.bipropellant_rocket_engine.chamber_pressure 257.0^^float) (JOIN "
      "spaceflight.bipropellant_rocket_engine.oxidizer m.01tm_5)) spaceflight.bipropellant_rocket_engine)";
  EXPECT_EQ(print_canonical(parse_sexpr(kLoxEngine)), print_canonical(parse_sexpr(reordered)));
}

TEST(SexprAnalysisTest, FunctionClassAndRelationCount) {
  EXPECT_EQ(function_class(parse_sexpr(kDecimetreSystem)), FunctionClass::None);
  EXPECT_EQ(relation_count(parse_sexpr(kDecimetreSystem)), 1u);
  EXPECT_EQ(function_class(parse_sexpr(kLoxEngine)), FunctionClass::Comparative);
  EXPECT_EQ(relation_count(parse_sexpr(kLoxEngine)), 2u);
  EXPECT_EQ(function_class(parse_sexpr(kSmallestResistivity)), FunctionClass::Superlative);
  EXPECT_EQ(relation_count(parse_sexpr(kSmallestResistivity)), 1u);
  EXPECT_EQ(function_class(parse_sexpr("(COUNT a.b)")), FunctionClass::Count);
  EXPECT_EQ(relation_count(parse_sexpr("(COUNT a.b)")), 0u);
  EXPECT_EQ(function_class(parse_sexpr("(COUNT (ARGMAX a.b r.s))")), FunctionClass::Superlative);
  EXPECT_EQ(relation_count(parse_sexpr("(JOIN (R r.s) (JOIN r.t e1))")), 2u);
}

TEST(SexprValidateTest, CatalogMembership) {
  auto store = test::desk_kb();
  EXPECT_TRUE(validate_schema(parse_sexpr(kSmallestResistivity), store).empty());
  auto wrong = parse_sexpr(
      "(ARGMIN measurement_unit.unit_of_resistance_unit "
      "measurement_unit.unit_of_resistivity.resistivity_in_ohm_meters)");
  auto violations = validate_schema(wrong, store);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].kind, SchemaViolation::Kind::UnknownClass);
  EXPECT_EQ(violations[0].name, "measurement_unit.unit_of_resistance_unit");
  EXPECT_TRUE(validate_schema(parse_sexpr("m.01p5ld"), store).empty());

  auto swapped = validate_schema(parse_sexpr("(JOIN measurement_unit.unit_of_length m.0foot)"), store);
  ASSERT_EQ(swapped.size(), 1u);
  EXPECT_EQ(swapped[0].kind, SchemaViolation::Kind::ClassUsedAsRelation);
}

TEST(SexprAtomTest, MachineIdsAreEntities) {
  EXPECT_FALSE(looks_like_class("m.01p5ld"));
  EXPECT_FALSE(looks_like_class("g.11b6"));
  EXPECT_FALSE(looks_like_class("e1"));
  EXPECT_TRUE(looks_like_class("ms.system"));
  EXPECT_TRUE(looks_like_class("measurement_unit.unit_of_length"));
}

class SexprPropertyTest : public ::testing::TestWithParam<int> {};

TEST_P(SexprPropertyTest, PrintParseFixedPointAndIdempotence) {
  std::mt19937_64 rng(GetParam());
  auto pool = test::random_pool(rng);
  for (int i = 0; i < 50; ++i) {
    auto form = test::random_form(rng, pool, 1 + i % 4);
    auto printed = print_sexpr(form);
    auto reparsed = parse_sexpr(printed);
    EXPECT_EQ(reparsed, form) << printed;
    EXPECT_EQ(print_sexpr(reparsed), printed);

    auto once = canonicalize(form);
    EXPECT_EQ(canonicalize(once), once) << printed;
    EXPECT_EQ(parse_sexpr(print_canonical(form)), once);
  }
}

TEST_P(SexprPropertyTest, ValidatedNamesAreInCatalog) {
  std::mt19937_64 rng(GetParam() + 77);
  auto store = test::random_store(rng, 12);
  auto pool = test::pool_from_store(store);
  pool.classes.push_back("cls.missing");
  pool.relations.push_back("rel.missing");
  for (int i = 0; i < 50; ++i) {
    auto form = test::random_form(rng, pool, 3);
    auto symbols = collect_symbols(form);
    bool all_known = true;
    for (const auto& c : symbols.classes) all_known = all_known && store.has_class(c);
    for (const auto& r : symbols.relations) all_known = all_known && store.has_relation(r);
    EXPECT_EQ(validate_schema(form, store).empty(), all_known) << print_sexpr(form);
  }
}

TEST_P(SexprPropertyTest, CanonicalizationPreservesDenotation) {
  std::mt19937_64 rng(GetParam() + 500);
  auto store = test::toy_kb();
  auto pool = test::pool_from_store(store);
  for (int i = 0; i < 50; ++i) {
    auto form = test::random_form(rng, pool, 3);
    EXPECT_EQ(evaluate(form, store), evaluate(canonicalize(form), store)) << print_sexpr(form);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, SexprPropertyTest, ::testing::Range(0, 20));

}  // namespace
}  // namespace kbqa
