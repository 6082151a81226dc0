#include "reactsim/recipe.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace reactsim;
using reactsim::testing::shared_context;

namespace {

std::string titration_text() {
  std::ifstream in(std::string(REACTSIM_SOURCE_DIR) + "/recipes/titration.recipe");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void expect_parse_error(std::string_view text, std::size_t line, std::size_t column) {
  try {
    parse_recipe(text);
    ADD_FAILURE() << "parsed: " << text;
  } catch (const RecipeParseError& e) {
    EXPECT_EQ(e.line(), line) << text;
    EXPECT_EQ(e.column(), column) << text;
  }
}

}  // namespace

TEST(Recipe, ParsesEachVerb) {
  const Recipe r = parse_recipe(
      "create A {KMnO4: 0.01 mol} volume 0.1 L\n"
      "pour A -> B 0.05 L\n"
      "sample B -> C 0.01 L\n"
      "tick 2.5 s\n"
      "expect pH(B) in [1.9, 2.1]\n"
      "print B\n");
  ASSERT_EQ(r.tasks.size(), 6u);
  EXPECT_EQ(r.tasks[0].kind, TaskKind::create);
  EXPECT_EQ(r.tasks[0].amounts.size(), 1u);
  EXPECT_EQ(r.tasks[0].amounts[0].first, "KMnO4");
  EXPECT_EQ(std::get<Literal>(*r.tasks[0].quantity).text, "0.1");
  EXPECT_EQ(r.tasks[1].dst, "B");
  EXPECT_EQ(r.tasks[2].id, "C");
  EXPECT_EQ(r.tasks[4].observation.observable, "pH");
  EXPECT_EQ(r.tasks[4].lo, 1.9);
  EXPECT_EQ(r.tasks[5].line, 6u);
}

TEST(Recipe, CommentsAndBlankLines) {
  const Recipe r = parse_recipe("# header\n\n   \ntick 1 s # trailing\n");
  ASSERT_EQ(r.tasks.size(), 1u);
  EXPECT_EQ(r.tasks[0].line, 4u);
}

TEST(Recipe, SpeciesObservation) {
  const Recipe r = parse_recipe("expect moles:Fe^3+(B) in [0.04, 0.06]\n");
  EXPECT_EQ(r.tasks[0].observation.species, "Fe^3+");
  EXPECT_EQ(r.tasks[0].observation.container, "B");
}

TEST(Recipe, LateBoundQuantity) {
  const Recipe r = parse_recipe("pour A -> B volume(A) L\n");
  EXPECT_EQ(std::get<ObservationRef>(*r.tasks[0].quantity).observable, "volume");
}

TEST(Recipe, ParseErrorsCarryPosition) {
  expect_parse_error("tick 5\n", 1, 7);
  expect_parse_error("tick 5 L\n", 1, 8);
  expect_parse_error("\nfrobnicate A\n", 2, 1);
  expect_parse_error("pour A B 1 L\n", 1, 8);
  expect_parse_error("create A {H+ 1 mol} volume 1 L\n", 1, 14);
  expect_parse_error("expect colour(A) in [0, 1]\n", 1, 8);
  expect_parse_error("tick 1 s extra\n", 1, 10);
  expect_parse_error("tick 1..2 s\n", 1, 6);
}

TEST(Recipe, FormatRoundTrip) {
  const Recipe r = parse_recipe(titration_text());
  ASSERT_FALSE(r.tasks.empty());
  const Recipe again = parse_recipe(format_recipe(r));
  EXPECT_EQ(again.tasks, r.tasks);
  EXPECT_EQ(format_recipe(again), format_recipe(r));
}

TEST(Recipe, EmptyRecipeLeavesWorldUnchanged) {
  World w(shared_context());
  const auto before = w.snapshot();
  const ExecutionReport report = execute(parse_recipe(""), w);
  EXPECT_TRUE(report.outcomes.empty());
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(w.snapshot(), before);
}

TEST(Recipe, FailedExpectDoesNotHalt) {
  World w(shared_context());
  const ExecutionReport report = execute(parse_recipe(
                                             "create A {HCl: 0.01 mol} volume 1 L\n"
                                             "expect pH(A) in [5, 6]\n"
                                             "create B {NaOH: 0.01 mol} volume 1 L\n"
                                             "expect pH(B) in [11.9, 12.1]\n"),
                                         w);
  ASSERT_EQ(report.outcomes.size(), 4u);
  EXPECT_EQ(report.outcomes[1].status, "failed");
  EXPECT_EQ(report.outcomes[3].status, "passed");
  EXPECT_FALSE(report.ok());
  EXPECT_FALSE(report.halted_at);
}

TEST(Recipe, HardErrorHalts) {
  World w(shared_context());
  const ExecutionReport report = execute(parse_recipe(
                                             "create A {HCl: 0.01 mol} volume 0.1 L\n"
                                             "create B {} volume 0 L\n"
                                             "pour A -> B 1 L\n"
                                             "tick 1 s\n"),
                                         w);
  ASSERT_TRUE(report.halted_at);
  EXPECT_EQ(*report.halted_at, 2u);
  EXPECT_EQ(report.error_code, "insufficient_volume");
  EXPECT_EQ(report.outcomes.size(), 3u);
  EXPECT_EQ(w.clock(), 0.0);
}

TEST(Recipe, LateBindingReadsCurrentState) {
  World w(shared_context());
  const ExecutionReport report = execute(parse_recipe(
                                             "create A {HCl: 0.01 mol} volume 0.3 L\n"
                                             "create B {} volume 0 L\n"
                                             "pour A -> B 0.1 L\n"
                                             "pour A -> B volume(A) L\n"
                                             "expect volume(A) in [0, 0]\n"
                                             "expect volume(B) in [0.3, 0.3]\n"),
                                         w);
  EXPECT_TRUE(report.ok()) << canonical_report(report);
}

TEST(Recipe, TitrationClimbsMonotonically) {
  World w(shared_context());
  const ExecutionReport report = execute(parse_recipe(titration_text()), w);
  EXPECT_TRUE(report.ok()) << canonical_report(report);
  double last = 0.0;
  for (const auto& e : report.expects) {
    if (e.text.rfind("expect pH(flask)", 0) != 0) continue;
    ASSERT_TRUE(e.value);
    EXPECT_GT(*e.value, last);
    last = *e.value;
  }
}

TEST(Recipe, ReportsAreByteIdentical) {
  World a(shared_context());
  World b(shared_context());
  const Recipe r = parse_recipe(titration_text());
  EXPECT_EQ(canonical_report(execute(r, a)), canonical_report(execute(r, b)));
}
