#pragma once

// Seeded random profiles for property tests and constructive searches.
//
// f uses harmonics 1, 3, 5 with a_1 solved from the pole slope condition;
// V uses harmonics 0..3. Profiles failing validation are redrawn.

#include <random>
#include <vector>

#include "fzmol/effective.hpp"
#include "fzmol/profile.hpp"

namespace fzmol::testing {

struct ProfileGen {
  std::mt19937_64 rng;
  double f_spread = 0.12;
  double v_spread = 0.5;
  int v_harmonics = 3;  // highest V harmonic
  bool zero_potential = false;
  Surface surface = Surface::ProjectivePlane;

  explicit ProfileGen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

  Profile draw() {
    for (;;) {
      Profile p;
      p.surface = surface;
      const double a3 = uniform(-f_spread, f_spread);
      const double a5 = uniform(-f_spread, f_spread);
      p.f_coeffs = {{1, 1.0 - 3.0 * a3 - 5.0 * a5}, {3, a3}, {5, a5}};
      if (!zero_potential)
        for (int j = 1; j <= v_harmonics; ++j) p.v_coeffs.push_back({j, uniform(-v_spread, v_spread)});
      if (validate(p).passed) return p;
    }
  }

  /// An energy strictly inside the range of V (or above it for V = 0).
  double energy(const Profile& p) {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= 512; ++i) {
      const double v = eval_V(p, p.L * i / 512.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo < 1e-12) return lo + uniform(0.1, 2.0);
    return uniform(lo + 0.02 * (hi - lo), hi + 0.5 * (hi - lo));
  }
};

}  // namespace fzmol::testing
