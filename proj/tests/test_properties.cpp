// Whole-pipeline properties over random profiles.

#include <gtest/gtest.h>

#include "fzmol/pipeline.hpp"
#include "support/conformance.hpp"
#include "support/random_profiles.hpp"

using namespace fzmol;
using namespace fzmol::testing;

TEST(Pipeline, RandomProfilesClassifyCleanly) {
  ProfileGen gen(61);
  RunOptions opt;
  opt.oracle_per_band = 10;
  int ok = 0;
  for (int i = 0; i < 50; ++i) {
    Profile p = gen.draw();
    p.surface = i % 5 == 0 ? Surface::Sphere : Surface::ProjectivePlane;
    for (int t = 0; t < 3; ++t) {
      const auto rec = classify_energy(p, gen.energy(p), opt);
      ASSERT_NE(rec.status, EnergyStatus::CheckFailed) << rec.message;
      if (rec.status != EnergyStatus::Ok) continue;
      ++ok;
      for (const auto& c : rec.components) {
        ASSERT_TRUE(c.oracle.has_value());
        EXPECT_TRUE(c.oracle->passed);
        EXPECT_TRUE(c.labeled.topalov_ok);
        EXPECT_TRUE(check_conformance(c.labeled).empty());
      }
    }
  }
  EXPECT_GT(ok, 120);
}

TEST(Pipeline, ZeroPotentialAlwaysFullRP2) {
  ProfileGen gen(62);
  gen.zero_potential = true;
  gen.f_spread = 0.2;
  for (int i = 0; i < 30; ++i) {
    const Profile p = gen.draw();
    const auto rec = classify_energy(p, gen.energy(p));
    if (rec.status == EnergyStatus::Skipped) continue;
    ASSERT_EQ(rec.status, EnergyStatus::Ok) << rec.message;
    ASSERT_EQ(rec.components.size(), 1u);
    const auto& lm = rec.components[0].labeled;
    EXPECT_EQ(lm.molecule.component.projection, Projection::FullRP2);
    EXPECT_EQ(lm.topology, Topology::lens(4, 1));
    for (const auto& f : lm.families) EXPECT_EQ(f.n, -2);
  }
}

TEST(Pipeline, ConcurrentSweepMatchesSequential) {
  ProfileGen gen(63);
  const Profile p = gen.draw();
  const auto hs = sweep_energies(-0.5, 2.0, 24);
  const auto par = classify_energies(p, hs);
  ASSERT_EQ(par.size(), hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const auto seq = classify_energy(p, hs[i]);
    EXPECT_EQ(par[i].h, hs[i]);
    EXPECT_EQ(par[i].status, seq.status);
    EXPECT_EQ(par[i].components.size(), seq.components.size());
  }
}

TEST(Pipeline, ExitStatus) {
  EnergyRecord ok, skipped, failed;
  skipped.status = EnergyStatus::Skipped;
  failed.status = EnergyStatus::CheckFailed;
  EXPECT_EQ(exit_status({ok}), 0);
  EXPECT_EQ(exit_status({skipped}), 3);
  EXPECT_EQ(exit_status({ok, skipped}), 0);
  EXPECT_EQ(exit_status({ok, failed, skipped}), 2);
  EXPECT_EQ(sweep_energies(1.0, 2.0, 1), std::vector<double>{1.0});
  EXPECT_EQ(sweep_energies(0.0, 1.0, 3), (std::vector<double>{0.0, 0.5, 1.0}));
}
