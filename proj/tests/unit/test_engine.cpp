#include "reactsim/engine.hpp"

#include "random_mixture.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace reactsim;
using reactsim::testing::db;
using reactsim::testing::q;

namespace {

Mixture permanganate() {
  Mixture m;
  m.amounts = {{"Fe^2+", q("0.05")}, {"MnO4-", q("0.01")}, {"H+", q("0.08")},
               {"Cl-", q("0.18")},   {"K+", q("0.01")}};
  m.volume_l = q("0.1");
  return m;
}

}  // namespace

TEST(Engine, NetChargeAndElements) {
  const Mixture m = permanganate();
  EXPECT_EQ(net_charge(m, db()), 0);
  const auto e = element_totals(m.amounts, db());
  EXPECT_EQ(e.at("Fe"), q("0.05"));
  EXPECT_EQ(e.at("O"), q("0.04"));
  EXPECT_EQ(e.at("Cl"), q("0.18"));
}

TEST(Engine, PermanganateFiresReactionSixteen) {
  const auto report = resolve(permanganate(), db());
  ASSERT_EQ(report.steps.size(), 1u);
  const auto& s = report.steps[0];
  EXPECT_EQ(s.reaction_id, 16);
  EXPECT_EQ(s.quantity, q("0.01"));
  EXPECT_EQ(report.final.amount("Fe^3+"), q("0.05"));
  EXPECT_EQ(report.final.amount("Mn^2+"), q("0.01"));
  EXPECT_EQ(report.final.amount("H2O"), q("0.04"));
  EXPECT_EQ(report.final.amount("Fe^2+"), 0);
  EXPECT_NEAR(*s.heat_released_kj, 6.4272, 1e-9);
  EXPECT_EQ(report.spectators, (std::set<std::string>{"Cl-", "K+"}));
}

TEST(Engine, AcidBaseBeatsRedox) {
  Mixture m = permanganate();
  m.amounts["OH-"] = q("0.02");
  m.amounts["Na+"] = q("0.02");
  const auto report = resolve(m, db());
  ASSERT_GE(report.steps.size(), 2u);
  EXPECT_EQ(report.steps[0].reaction_id, 1);
  EXPECT_EQ(report.steps[0].quantity, q("0.02"));
  EXPECT_EQ(report.steps[1].reaction_id, 16);
  EXPECT_EQ(report.steps[1].quantity, q("0.0075"));
}

TEST(Engine, NothingApplicableLeavesMixtureUnchanged) {
  Mixture m;
  m.amounts = {{"Na+", q("0.1")}, {"Cl-", q("0.1")}};
  const auto report = resolve(m, db());
  EXPECT_TRUE(report.steps.empty());
  EXPECT_EQ(report.final, m);
  EXPECT_EQ(report.spectators, (std::set<std::string>{"Cl-", "Na+"}));
}

TEST(Engine, ChargeImbalanceRejected) {
  Mixture m;
  m.amounts = {{"Fe^2+", q("5")}, {"MnO4-", q("1")}, {"H+", q("8")}, {"Cl-", q("10")}, {"K+", q("1")}};
  try {
    resolve(m, db());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::charge_imbalance);
  }
}

TEST(Engine, InvalidVolumeRejected) {
  Mixture m;
  m.volume_l = 0;
  EXPECT_THROW(resolve(m, db()), Error);
}

TEST(Engine, ExtractPartitionsPresentSpecies) {
  const Reaction& r16 = *db().find_reaction(16);
  const Extraction x = extract(permanganate(), r16);
  EXPECT_EQ(x.reacting.size(), 3u);
  EXPECT_EQ(x.spectating.size(), 2u);
  EXPECT_EQ(x.spectating.at("Cl-"), q("0.18"));
  Mixture water;
  water.amounts = {{"Na+", 1}, {"Cl-", 1}};
  EXPECT_THROW(extract(water, r16), Error);
}

TEST(Engine, ApplyReactionLimits) {
  const Reaction& r16 = *db().find_reaction(16);
  const Mixture m = permanganate();
  EXPECT_EQ(reaction_quantity(m, r16), q("0.01"));
  EXPECT_THROW(apply_reaction(m, r16, q("0.02")), Error);
  EXPECT_THROW(apply_reaction(m, r16, q("-0.01")), Error);
  const auto [same, zero] = apply_reaction(m, r16, 0);
  EXPECT_EQ(same, m);
  EXPECT_EQ(zero.quantity, 0);
  const auto [half, step] = apply_reaction(m, r16, q("0.005"));
  EXPECT_EQ(half.amount("Fe^2+"), q("0.025"));
  EXPECT_EQ(step.consumed.at("H+"), q("0.04"));
}

TEST(Engine, DissociationExpandsCompounds) {
  const auto& table = reactsim::testing::context().dissociation;
  const Amounts a = table.expand({{"KMnO4", q("0.01")}, {"FeCl2", q("0.05")}, {"HCl", q("0.08")}}, db());
  EXPECT_EQ(a.at("K+"), q("0.01"));
  EXPECT_EQ(a.at("MnO4-"), q("0.01"));
  EXPECT_EQ(a.at("Fe^2+"), q("0.05"));
  EXPECT_EQ(a.at("Cl-"), q("0.18"));
  EXPECT_EQ(a.at("H+"), q("0.08"));
  EXPECT_EQ(table.expand("Fe2+", 1, db()).begin()->first, "Fe^2+");
  EXPECT_THROW(table.expand("Unobtainium", 1, db()), Error);
}

TEST(Engine, ReportSerialisationIsStable) {
  const auto a = to_json(resolve(permanganate(), db()), db()).dump();
  const auto b = to_json(resolve(permanganate(), db()), db()).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"reaction_id\":16"), std::string::npos);
}

class EngineProperty : public ::testing::TestWithParam<int> {};

TEST_P(EngineProperty, ConservationReplayAndProgress) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()));
  for (int i = 0; i < 50; ++i) {
    const Mixture m = reactsim::testing::random_mixture(rng, db());
    const ResolutionReport r = resolve(m, db());
    ASSERT_EQ(net_charge(r.final, db()), 0);
    ASSERT_EQ(element_totals(r.final.amounts, db()), element_totals(m.amounts, db()));
    ASSERT_EQ(replay(m, r.steps), r.final);
    ASSERT_EQ(find_applicable(r.final, db()), nullptr);

    Mixture current = m;
    for (const auto& step : r.steps) {
      const Reaction& reaction = *db().find_reaction(step.reaction_id);
      ASSERT_EQ(find_applicable(current, db())->id, step.reaction_id);
      current = replay(current, {step});
      bool limited = false;
      for (const auto& t : reaction.reactants) limited = limited || !is_present(current.amount(t.species));
      ASSERT_TRUE(limited) << "reaction " << step.reaction_id;
    }
    EXPECT_EQ(to_json(r, db()).dump(), to_json(resolve(m, db()), db()).dump());
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, EngineProperty, ::testing::Range(1, 6));
