#include "reactsim/container.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace reactsim;
using reactsim::testing::q;
using reactsim::testing::shared_context;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::io_error;
}

std::map<std::string, Rational> ledger(const World& w) {
  std::map<std::string, Rational> total;
  for (const auto& [id, c] : w.containers()) {
    const Amounts& a = c.pending ? c.pending->final.amounts : c.contents.amounts;
    for (const auto& [name, n] : a) total[name] += n;
  }
  return total;
}

World bench() {
  World w(shared_context());
  w.create_container_from_names("A", {{"KMnO4", q("0.01")}}, q("0.1"));
  w.create_container_from_names("B", {{"FeCl2", q("0.05")}, {"HCl", q("0.08")}}, q("0.1"));
  return w;
}

}  // namespace

TEST(Container, CreateExpandsCompounds) {
  World w = bench();
  const Container& b = w.container("B");
  EXPECT_EQ(b.contents.amount("Fe^2+"), q("0.05"));
  EXPECT_EQ(b.contents.amount("Cl-"), q("0.18"));
  EXPECT_FALSE(b.pending);
}

TEST(Container, CreateErrors) {
  World w = bench();
  EXPECT_EQ(code_of([&] { w.create_container_from_names("A", {}, q("0.1")); }), ErrorCode::duplicate_id);
  EXPECT_EQ(code_of([&] { w.create_container("C", {{"H+", q("0.1")}}, q("0.1")); }), ErrorCode::charge_imbalance);
  EXPECT_EQ(code_of([&] { w.create_container("C", {{"H+", q("0.1")}, {"Cl-", q("0.1")}}, 0); }),
            ErrorCode::invalid_volume);
  EXPECT_EQ(code_of([&] { w.create_container_from_names("C", {{"Kryptonite", 1}}, 1); }), ErrorCode::unknown_species);
  EXPECT_NO_THROW(w.create_container("empty", {}, 0));
  EXPECT_FALSE(w.get_info("empty").representation);
}

TEST(Container, PourFiresPermanganateReaction) {
  World w = bench();
  const PourResult r = w.pour("A", "B", q("0.1"));
  ASSERT_EQ(r.report.steps.size(), 1u);
  EXPECT_EQ(r.report.steps[0].reaction_id, 16);
  EXPECT_EQ(r.report.steps[0].quantity, q("0.01"));
  ASSERT_TRUE(r.trajectory_id);
  EXPECT_EQ(w.container("A").contents.volume_l, 0);
  EXPECT_EQ(w.container("B").contents.volume_l, q("0.2"));

  const Container& b = w.container("B");
  ASSERT_TRUE(b.pending);
  const double duration = b.pending->model.duration();
  w.tick(duration + 1.0);
  EXPECT_FALSE(w.container("B").pending);
  EXPECT_EQ(w.container("B").contents.amount("Fe^3+"), q("0.05"));
  const auto info = w.get_info("B");
  ASSERT_TRUE(info.representation);
  EXPECT_NEAR(info.representation->temperature_c, 25.0 + 15.376076555 / 2, 1e-6);
  EXPECT_NEAR(info.representation->heat_released_kj, 6.4272, 1e-9);
}

TEST(Container, MidStateEvolvesWithTicks) {
  World w = bench();
  w.pour("A", "B", q("0.1"));
  const double fe0 = w.get_info("B").components.at("Fe^2+");
  w.tick(1.0);
  const auto info = w.get_info("B");
  EXPECT_NEAR(info.components.at("Fe^2+"), 0.05 * std::exp(-1.0), 1e-12);
  EXPECT_LT(info.components.at("Fe^2+"), fe0);
  EXPECT_EQ(info.trajectory_cursor_s, 1.0);
  EXPECT_GT(info.representation->temperature_c, 25.0);
}

TEST(Container, GetInfoIsPure) {
  World w = bench();
  w.pour("A", "B", q("0.05"));
  w.tick(0.5);
  const auto before = w.snapshot();
  EXPECT_EQ(to_json(w.get_info("B")), to_json(w.get_info("B")));
  EXPECT_EQ(w.snapshot(), before);
}

TEST(Container, PourErrors) {
  World w = bench();
  EXPECT_EQ(code_of([&] { w.pour("A", "B", q("0.2")); }), ErrorCode::insufficient_volume);
  EXPECT_EQ(code_of([&] { w.pour("A", "B", 0); }), ErrorCode::invalid_volume);
  EXPECT_EQ(code_of([&] { w.pour("A", "Z", q("0.01")); }), ErrorCode::unknown_container);
  EXPECT_EQ(code_of([&] { w.pour("A", "A", q("0.01")); }), ErrorCode::invalid_argument);
  w.create_container("E", {}, 0);
  EXPECT_EQ(code_of([&] { w.pour("E", "A", q("0.01")); }), ErrorCode::insufficient_volume);
}

TEST(Container, PourCommitsPendingTrajectoryFirst) {
  World w = bench();
  w.pour("A", "B", q("0.05"));
  const int first = w.container("B").pending->trajectory_id;
  w.pour("A", "B", q("0.05"));
  EXPECT_TRUE(w.trajectory(first).closed_at.has_value());
  bool committed = false;
  for (const auto& e : w.container("B").history) committed = committed || (e.kind == "commit" && e.detail["reason"] == "pour");
  EXPECT_TRUE(committed);
}

TEST(Container, MixingTemperatureIsVolumeWeighted) {
  World w(shared_context());
  w.create_container("hot", {{"Na+", q("0.01")}, {"Cl-", q("0.01")}}, q("0.1"), 80.0);
  w.create_container("cold", {{"Na+", q("0.01")}, {"Cl-", q("0.01")}}, q("0.3"), 20.0);
  w.pour("hot", "cold", q("0.1"));
  EXPECT_DOUBLE_EQ(w.container("cold").contents.temperature_c, 35.0);
}

TEST(Container, SampleSplitsProportionally) {
  World w = bench();
  w.sample("B", "probe", q("0.025"));
  EXPECT_EQ(w.container("probe").contents.amount("Fe^2+"), q("0.0125"));
  EXPECT_EQ(w.container("B").contents.amount("Fe^2+"), q("0.0375"));
  EXPECT_EQ(w.container("B").contents.volume_l, q("0.075"));
  EXPECT_THROW(w.sample("B", "probe", q("0.01")), Error);
  EXPECT_THROW(w.sample("B", "p2", q("1")), Error);
}

TEST(Container, MassLedgerChangesOnlyThroughResolution) {
  World w = bench();
  w.create_container_from_names("C", {{"NaOH", q("0.02")}}, q("0.05"));
  const auto start = ledger(w);
  w.sample("B", "probe", q("0.02"));
  EXPECT_EQ(ledger(w), start);

  Amounts expected = start;
  auto apply = [&](const PourResult& r) {
    for (const auto& s : r.report.steps) {
      for (const auto& [n, v] : s.consumed) expected[n] -= v;
      for (const auto& [n, v] : s.produced) expected[n] += v;
    }
    std::erase_if(expected, [](const auto& kv) { return kv.second == 0; });
  };
  apply(w.pour("C", "B", q("0.05")));
  apply(w.pour("A", "B", q("0.1")));
  apply(w.pour("probe", "B", q("0.02")));
  auto actual = ledger(w);
  std::erase_if(actual, [](const auto& kv) { return kv.second == 0; });
  EXPECT_EQ(actual, expected);
}

TEST(Container, SnapshotReplays) {
  World w = bench();
  w.pour("A", "B", q("0.04"));
  w.tick(2.5);
  w.sample("B", "probe", q("0.01"));
  w.pour("A", "B", q("0.06"));
  w.tick(100);
  const auto snap = w.snapshot();
  const World again = World::restore(shared_context(), snap);
  EXPECT_EQ(again.snapshot(), snap);
  EXPECT_EQ(to_json(again.get_info("B")), to_json(w.get_info("B")));
}

TEST(Container, TamperedSnapshotRejected) {
  World w = bench();
  w.pour("A", "B", q("0.04"));
  auto snap = w.snapshot();
  snap["containers"][0]["volume_l"] = "1";
  try {
    World::restore(shared_context(), snap);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::snapshot_mismatch);
  }
}

TEST(Container, TickRejectsNonPositive) {
  World w = bench();
  EXPECT_THROW(w.tick(0), Error);
  EXPECT_THROW(w.tick(-1), Error);
}
