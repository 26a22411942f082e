#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fzmol/molecule.hpp"
#include "support/mirror.hpp"
#include "support/random_profiles.hpp"
#include "support/reference.hpp"

using namespace fzmol;
using namespace fzmol::testing;

namespace {

constexpr double pi = std::numbers::pi;

std::string shape(const Molecule& m) {
  std::string s;
  for (const auto& a : m.atoms) s += (s.empty() ? "" : " ") + atom_name(a);
  return s;
}

}  // namespace

TEST(Molecule, RoundIsCentralAA) {
  const auto ms = enumerate_isoenergy_components(round_profile(), 1.0);
  ASSERT_EQ(ms.size(), 1u);
  const auto& m = ms[0];
  EXPECT_TRUE(m.is_AA());
  EXPECT_TRUE(m.quotient);
  EXPECT_EQ(m.poles, 2);
  EXPECT_TRUE(m.atoms[0].is_central && m.atoms[1].is_central);
  EXPECT_NEAR(m.atoms[1].level_k, std::sqrt(2.0), 1e-14);
  EXPECT_TRUE(m.edges[0].is_central_edge);
  EXPECT_TRUE(m.edges[0].central_torus);
}

TEST(Molecule, StarCase) {
  const auto ms = enumerate_isoenergy_components(star_profile(), 1.0);
  ASSERT_EQ(ms.size(), 1u);
  const auto& m = ms[0];
  EXPECT_EQ(shape(m), "A A* A* A");
  EXPECT_EQ(m.edges.size(), 3u);
  EXPECT_EQ(m.atoms[1].stars, 1);
  EXPECT_TRUE(m.atoms[1].is_central);
  EXPECT_FALSE(m.atoms[0].is_central);
  EXPECT_NEAR(m.atoms[3].level_k, std::sqrt(10.0 / 27.0), 1e-12);
  EXPECT_NEAR(m.atoms[2].level_k, std::sqrt(0.08), 1e-12);
  EXPECT_TRUE(mirror_symmetric(m));
}

TEST(Molecule, StarProfileOnSphere) {
  // Same profile on S^2: two maxima merged by the equatorial minimum.
  const auto ms = enumerate_isoenergy_components(star_profile(Surface::Sphere), 1.0);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(shape(ms[0]), "A A V_2 V_2 A A");
  EXPECT_EQ(ms[0].atoms[2].circles, 1);
  EXPECT_FALSE(ms[0].quotient);
  EXPECT_TRUE(mirror_symmetric(ms[0]));
}

TEST(Molecule, ReferenceAA) {
  for (const auto& p : {disk_profile(), mobius_profile(), annulus_profile()}) {
    const auto ms = enumerate_isoenergy_components(p, 0.5);
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_TRUE(ms[0].is_AA());
  }
  const auto mob = enumerate_isoenergy_components(mobius_profile(), 0.5)[0];
  EXPECT_TRUE(mob.atoms[0].is_central);
  EXPECT_EQ(mob.poles, 0);
  const auto disk = enumerate_isoenergy_components(disk_profile(), 0.5)[0];
  EXPECT_FALSE(disk.atoms[0].is_central);
  EXPECT_EQ(disk.poles, 1);
}

TEST(Molecule, CentralMaximumGivesCentralA) {
  // Search for a projective profile whose center is a local maximum among other maxima.
  ProfileGen gen(31);
  int found = 0;
  for (int i = 0; i < 400 && found < 3; ++i) {
    const Profile p = gen.draw();
    const double h = gen.energy(p);
    std::vector<Molecule> ms;
    try {
      ms = enumerate_isoenergy_components(p, h);
    } catch (const Error&) {
      continue;
    }
    for (const auto& m : ms) {
      const auto& cps = m.component.crit_points;
      if (m.is_AA() || cps.empty() || !cps.back().is_central || cps.back().kind != CritKind::LocalMax)
        continue;
      ++found;
      int central_a = 0, central_edges = 0;
      for (const auto& a : m.atoms) central_a += a.kind == AtomKind::A && a.is_central;
      for (const auto& e : m.edges)
        if (e.central_torus && !m.atoms[e.dst].is_saddle()) {
          ++central_edges;
          EXPECT_EQ(e.role_at_src, TorusRole::InnerCentral);
        }
      EXPECT_EQ(central_a, 2);
      EXPECT_EQ(central_edges, 1);  // only the K > 0 side points at the A atom
      EXPECT_TRUE(mirror_symmetric(m));
    }
  }
  EXPECT_GT(found, 0);
}

TEST(Molecule, AliveEdgesAndLevels) {
  const auto m = enumerate_isoenergy_components(star_profile(), 1.0)[0];
  const auto ks = critical_levels(m);
  ASSERT_EQ(ks.size(), 2u);
  EXPECT_EQ(alive_edges(m, 0.1), 1);
  EXPECT_EQ(alive_edges(m, 0.4), 1);
  EXPECT_EQ(alive_edges(m, -0.4), 1);
  EXPECT_EQ(alive_edges(m, 0.7), 0);
}

TEST(Molecule, MirrorMinimaFormOneSaddle) {
  // On S^2 a central maximum between two outer maxima: the mirror pair of minima
  // sits on one critical level and merges three intervals at once (V_3, two circles).
  ProfileGen gen(33);
  gen.surface = Surface::Sphere;
  int found = 0;
  for (int i = 0; i < 400 && found < 3; ++i) {
    const Profile p = gen.draw();
    const double h = gen.energy(p);
    std::vector<Molecule> ms;
    try {
      ms = enumerate_isoenergy_components(p, h);
    } catch (const Error&) {
      continue;
    }
    for (const auto& m : ms) {
      const auto& cps = m.component.crit_points;
      if (cps.size() != 5 || !cps[2].is_central || cps[2].kind != CritKind::LocalMax) continue;
      ++found;
      EXPECT_EQ(shape(m), "A A A V_3 V_3 A A A");
      EXPECT_EQ(m.atoms[3].circles, 2);
    }
  }
  EXPECT_GT(found, 0);
}

TEST(Molecule, NonAlternatingInputRejected) {
  std::vector<CriticalPoint> cps = {{0.5, 1.0, CritKind::LocalMin, false, 1}};
  try {
    build_sphere_half_molecule(round_profile(), 1.0, 0.0, pi, cps);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InternalSweepMismatch);
  }
}

TEST(Molecule, CentralSaddleWithCenterAndPairsUnsupported) {
  const double L = pi;
  HalfMolecule half;
  Atom a1, a2, a3, v;
  a1.level_k = a2.level_k = a3.level_k = 1.0;
  a1.crit_rs = {0.5};
  a2.crit_rs = {1.2};
  a3.crit_rs = {L - 0.5};
  Atom a4 = a2;
  a4.crit_rs = {L - 1.2};
  v.kind = AtomKind::V;
  v.level_k = 0.5;
  v.circles = 3;
  v.l = 4;
  v.crit_rs = {0.9, L / 2, L - 0.9};
  half.atoms = {a1, a2, a4, a3, v};
  for (int i = 0; i < 4; ++i) half.edges.push_back({4, i, false, false, TorusRole::Inner, TorusRole::None});
  half.root = 4;
  try {
    detail::quotient_half(half, L);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedCentralAtom);
  }
}

TEST(Molecule, RandomMoleculesAreSymmetricTrees) {
  ProfileGen gen(32);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    Profile p = gen.draw();
    p.surface = i % 3 == 0 ? Surface::Sphere : Surface::ProjectivePlane;
    const double h = gen.energy(p);
    std::vector<Molecule> ms;
    try {
      ms = enumerate_isoenergy_components(p, h);
    } catch (const Error& e) {
      EXPECT_NE(e.code(), ErrorCode::InternalSweepMismatch) << e.what();
      continue;
    }
    for (const auto& m : ms) {
      ++checked;
      EXPECT_TRUE(mirror_symmetric(m));
      EXPECT_EQ(m.edges.size() + 1, m.atoms.size());  // a tree
      int crossing = 0;
      for (const auto& e : m.edges) {
        EXPECT_LT(m.atoms[e.src].level_k, m.atoms[e.dst].level_k);
        crossing += e.is_central_edge;
      }
      EXPECT_EQ(crossing, 1);
      for (const auto& a : m.atoms) {
        if (a.kind == AtomKind::A) continue;
        int out = 0;
        for (const auto& e : m.edges) out += (a.level_k > 0 ? e.src : e.dst) == (&a - m.atoms.data());
        EXPECT_EQ(a.kind == AtomKind::V ? a.l : 1, out) << atom_name(a);
      }
    }
  }
  EXPECT_GT(checked, 50);
}
