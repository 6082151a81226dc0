#include "reactsim/observables.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace reactsim;
using reactsim::testing::context;
using reactsim::testing::db;
using reactsim::testing::q;

namespace {

const KwTable& kw() { return context().kw; }

AcidBaseState ph_with(std::map<std::string, double> amounts, double volume, double t = 25.0) {
  return ph_of(amounts, volume, kw(), t);
}

}  // namespace

TEST(Observables, Concentration) {
  EXPECT_DOUBLE_EQ(concentration(0.01, 0.1), 0.1);
  EXPECT_THROW(concentration(1, 0), Error);
}

TEST(Observables, TemperatureChangeFromHeat) {
  EXPECT_NEAR(temperature_change(6.4272, SolventParams{}, 0.1), 15.376076555, 1e-8);
  EXPECT_DOUBLE_EQ(temperature_change(2 * 6.4272, SolventParams{}, 0.1),
                   2 * temperature_change(6.4272, SolventParams{}, 0.1));
  EXPECT_NEAR(temperature_change(6.4272, SolventParams{}, 0.2), temperature_change(6.4272, SolventParams{}, 0.1) / 2,
              1e-12);
  EXPECT_LT(temperature_change(-1.0, SolventParams{}, 1.0), 0.0);
}

TEST(Observables, OpacityShape) {
  EXPECT_EQ(opacity(0.0, 1.0), 0.0);
  double last = 0.0;
  for (double c : {1e-9, 1e-6, 1e-3, 0.1, 1.0, 5.0}) {
    const double a = opacity(c, 1.0);
    EXPECT_GT(a, last);
    EXPECT_LT(a, 1.0);
    last = a;
  }
  EXPECT_NEAR(opacity(1.0, 1.0), 0.9, 1e-15);
}

TEST(Observables, MixSingleEntryKeepsColour) {
  ColorEntry e{RGBA{200, 40, 90, 0.4}, PhysicalState::aqueous};
  ColorEntry clear{RGBA{255, 255, 255, 0.0}, PhysicalState::aqueous};
  const RGBA out = mix_colors(std::vector<ColorEntry>{e, clear});
  EXPECT_EQ(out.r, 200);
  EXPECT_EQ(out.g, 40);
  EXPECT_EQ(out.b, 90);
}

TEST(Observables, MixWithSelfPreservesColour) {
  ColorEntry e{RGBA{13, 170, 222, 0.3}, PhysicalState::aqueous};
  const RGBA out = mix_colors(std::vector<ColorEntry>{e, e});
  EXPECT_EQ(out.r, 13);
  EXPECT_EQ(out.g, 170);
  EXPECT_EQ(out.b, 222);
  EXPECT_NEAR(out.alpha, 1 - 0.7 * 0.7, 1e-12);
}

TEST(Observables, MixIsPermutationInvariant) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> channel(0, 255);
  std::uniform_real_distribution<double> alpha(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ColorEntry> entries;
    for (int i = 0; i < 5; ++i) {
      entries.push_back({RGBA{static_cast<std::uint8_t>(channel(rng)), static_cast<std::uint8_t>(channel(rng)),
                              static_cast<std::uint8_t>(channel(rng)), alpha(rng)},
                         PhysicalState::aqueous});
    }
    const RGBA reference = mix_colors(entries);
    std::shuffle(entries.begin(), entries.end(), rng);
    EXPECT_EQ(mix_colors(entries), reference);
  }
}

TEST(Observables, StatePriority) {
  ColorEntry liquid{RGBA{255, 0, 0, 0.5}, PhysicalState::aqueous};
  ColorEntry gas{RGBA{0, 0, 255, 0.9}, PhysicalState::gas};
  ColorEntry solid{RGBA{0, 0, 255, 0.2}, PhysicalState::solid};
  const RGBA no_gas = mix_colors(std::vector<ColorEntry>{liquid, gas});
  EXPECT_EQ(no_gas.r, 255);
  EXPECT_EQ(no_gas.b, 0);
  const RGBA turbid = mix_colors(std::vector<ColorEntry>{liquid, solid});
  EXPECT_EQ(turbid.alpha, 1.0);
  EXPECT_EQ(mix_colors(std::vector<ColorEntry>{}).alpha, 0.0);
}

TEST(Observables, PermanganateSolutionIsTinted) {
  const RGBA c = mixture_color({{"MnO4-", 0.01}, {"K+", 0.01}}, 0.1, db());
  EXPECT_GT(c.alpha, 0.0);
  const auto& mn = *db().species_at("MnO4-").color;
  EXPECT_EQ(c.r, mn.r);
  EXPECT_EQ(c.g, mn.g);
  EXPECT_EQ(c.b, mn.b);
}

TEST(Observables, KwTableNodes) {
  EXPECT_NEAR(kw().pkw_at(25.0), 14.0, 0.02);
  EXPECT_NEAR(kw().pkw_at(0.0), 14.94, 0.02);
  EXPECT_NEAR(kw().pkw_at(100.0), 12.265, 1e-12);
  EXPECT_THROW(kw().kw_at(-1.0), Error);
  EXPECT_THROW(kw().kw_at(100.5), Error);
}

TEST(Observables, PhReferenceValues) {
  EXPECT_NEAR(ph_with({}, 1.0).ph, 7.00, 0.01);
  EXPECT_NEAR(ph_with({{"H+", 0.01}}, 1.0).ph, 2.00, 0.01);
  EXPECT_NEAR(ph_with({{"OH-", 0.001}}, 1.0).ph, 11.00, 0.01);
  const double dilute = ph_with({{"H+", 1e-8}}, 1.0).ph;
  EXPECT_GT(dilute, 6.95);
  EXPECT_LT(dilute, 7.00);
}

TEST(Observables, IonProductHoldsAcrossTable) {
  for (double t = 0.0; t <= 100.0; t += 2.5) {
    for (double c : {-0.1, -1e-5, -1e-9, 0.0, 1e-9, 1e-5, 0.1}) {
      const AcidBaseState s = acid_base_state(c, kw().kw_at(t));
      EXPECT_NEAR(s.c_h * s.c_oh / s.kw, 1.0, 1e-6) << "T=" << t << " c=" << c;
      EXPECT_NEAR(s.ph, -std::log10(s.c_h), 1e-12);
    }
  }
}

TEST(Observables, AddingAcidLowersPh) {
  double last = 14.0;
  for (double n : {1e-10, 1e-8, 1e-6, 1e-4, 1e-2, 1.0}) {
    const double p = ph_with({{"H+", n}}, 1.0).ph;
    EXPECT_LT(p, last);
    last = p;
  }
}

TEST(Observables, UnresolvedMixtureRejected) {
  try {
    ph_with({{"H+", 0.01}, {"OH-", 0.001}}, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unresolved_mixture);
  }
  EXPECT_NEAR(net_ph_of({{"H+", 0.011}, {"OH-", 0.001}}, 1.0, kw(), 25.0).ph, 2.0, 0.01);
}
