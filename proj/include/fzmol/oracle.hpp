#pragma once

// Brute-force checks that share no root finding with the main pipeline.
//
// The level-set oracle samples U_h on a dense grid, refines the discrete
// extrema by golden-section search and counts superlevel runs from that sketch.
// The flow oracle integrates the Hamiltonian vector field with classical RK4.

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "fzmol/effective.hpp"
#include "fzmol/error.hpp"
#include "fzmol/molecule.hpp"
#include "fzmol/profile.hpp"

namespace fzmol {

inline constexpr int kOracleSamples = 1 << 15;

namespace oracle_detail {

inline double u_direct(const Profile& p, double h, double r) {
  const double f = eval_f(p, r);
  return 2.0 * f * f * (h - eval_V(p, r));
}

template <class F>
double golden_extremum(F&& fn, double lo, double hi, bool maximize) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto key = [&](double x) { return maximize ? fn(x) : -fn(x); };
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = key(x1), f2 = key(x2);
  for (int it = 0; it < 120 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = key(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = key(x1);
    }
  }
  return fn(0.5 * (lo + hi));
}

}  // namespace oracle_detail

/// U_h on the sphere double of a component reduced to its monotone pieces:
/// nodes are the interval ends and the refined extrema, in order of r.
struct USketch {
  std::vector<double> r;
  std::vector<double> u;
  bool symmetric = false;
  double center_u = 0.0;
  double max_u = 0.0;
};

inline USketch sketch_potential(const Profile& p, double h, const ComponentInterval& comp,
                                int samples = kOracleSamples) {
  double lo = comp.a, hi = comp.b;
  if (comp.surface == Surface::ProjectivePlane && comp.right_end == EndKind::Center) hi = p.L - comp.a;
  auto U = [&](double x) { return oracle_detail::u_direct(p, h, x); };

  std::vector<double> xs(samples + 1), us(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    xs[i] = i == samples ? hi : lo + (hi - lo) * i / samples;
    us[i] = U(xs[i]);
  }

  USketch s;
  s.symmetric = lo < 0.5 * p.L && 0.5 * p.L < hi;
  s.center_u = s.symmetric ? U(0.5 * p.L) : 0.0;
  s.r.push_back(lo);
  s.u.push_back(us[0]);
  int dir = 0;  // sign of the last nonzero difference
  int last_turn = 0;
  for (int i = 1; i <= samples; ++i) {
    const double d = us[i] - us[i - 1];
    const int sd = d > 0 ? 1 : (d < 0 ? -1 : 0);
    if (sd == 0) continue;
    if (dir != 0 && sd != dir) {
      // The extremum sits between the node before the turn and node i.
      const int j = std::max(last_turn, i - 2);
      s.r.push_back(0.5 * (xs[j] + xs[i]));
      s.u.push_back(oracle_detail::golden_extremum(U, xs[j], xs[i], dir > 0));
    }
    if (sd != dir) last_turn = i - 1;
    dir = sd;
  }
  s.r.push_back(hi);
  s.u.push_back(us[samples]);
  s.max_u = *std::max_element(s.u.begin(), s.u.end());
  return s;
}

struct LevelSignature {
  int sphere_runs = 0;  // intervals of {U_h > k^2} on the sphere double
  bool central = false;  // one of them contains the equator
  int count = 0;         // after identifying mirror pairs (projective components)

  friend bool operator==(const LevelSignature&, const LevelSignature&) = default;
};

inline LevelSignature level_signature(const USketch& s, double k, bool quotient) {
  const double c = k * k;
  LevelSignature sig;
  bool inside = false;
  for (double u : s.u) {
    if (u > c && !inside) ++sig.sphere_runs;
    inside = u > c;
  }
  sig.central = s.symmetric && s.center_u > c;
  if (quotient && s.symmetric) {
    const int c0 = sig.central ? 1 : 0;
    sig.count = (sig.sphere_runs - c0) / 2 + c0;
  } else {
    sig.count = sig.sphere_runs;
  }
  return sig;
}

/// Number of Liouville-torus families at K = k in the component.
inline int level_component_count(const Profile& p, double h, double k, const ComponentInterval& comp,
                                 int samples = kOracleSamples) {
  const auto s = sketch_potential(p, h, comp, samples);
  return level_signature(s, k, comp.surface == Surface::ProjectivePlane).count;
}

struct BifurcationEvent {
  double k = 0.0;
  int delta_count = 0;
  LevelSignature below;
  LevelSignature above;
};

struct BifurcationScan {
  std::vector<double> k_grid;
  std::vector<int> counts;
  std::vector<BifurcationEvent> events;
  double k_max = 0.0;
};

/// Counts on a uniform k grid over [0, sqrt(max U_h)] and the k values where
/// the level-set structure changes, bisected to 1e-10.
inline BifurcationScan bifurcation_scan(const Profile& p, double h, const ComponentInterval& comp,
                                        int grid_n = 2000, int samples = kOracleSamples) {
  const auto s = sketch_potential(p, h, comp, samples);
  const bool quotient = comp.surface == Surface::ProjectivePlane;
  BifurcationScan scan;
  scan.k_max = std::sqrt(std::max(s.max_u, 0.0));
  std::vector<LevelSignature> sigs;
  for (int i = 0; i <= grid_n; ++i) {
    // The top node sits just above sqrt(max U) so the last family is seen to vanish.
    const double k = i == grid_n ? scan.k_max * (1.0 + 1e-9) + 1e-15 : scan.k_max * i / grid_n;
    scan.k_grid.push_back(k);
    sigs.push_back(level_signature(s, k, quotient));
    scan.counts.push_back(sigs.back().count);
  }
  // Extremal values of the sketch, as k. A cell holding several of them is
  // probed between each pair, since changes can cancel across the cell.
  std::vector<double> ext;
  for (double u : s.u)
    if (u > 0.0) ext.push_back(std::sqrt(u));
  std::sort(ext.begin(), ext.end());
  for (int i = 0; i < grid_n; ++i) {
    const double k0 = scan.k_grid[i], k1 = scan.k_grid[i + 1];
    std::vector<double> inside;
    for (auto it = std::upper_bound(ext.begin(), ext.end(), k0); it != ext.end() && *it <= k1; ++it)
      if (inside.empty() || *it - inside.back() > 1e-10) inside.push_back(*it);
    if (inside.size() <= 1) {
      if (sigs[i] == sigs[i + 1]) continue;
      double lo = k0, hi = k1;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (level_signature(s, mid, quotient) == sigs[i]) lo = mid;
        else hi = mid;
      }
      scan.events.push_back({0.5 * (lo + hi), sigs[i + 1].count - sigs[i].count, sigs[i], sigs[i + 1]});
      continue;
    }
    LevelSignature prev = sigs[i];
    for (std::size_t j = 0; j < inside.size(); ++j) {
      const double probe = j + 1 < inside.size() ? 0.5 * (inside[j] + inside[j + 1]) : k1;
      const auto sig = level_signature(s, probe, quotient);
      if (sig == prev) continue;
      scan.events.push_back({inside[j], sig.count - prev.count, prev, sig});
      prev = sig;
    }
  }
  return scan;
}

struct OracleReport {
  bool passed = true;
  int events = 0;
  int checked_k = 0;
  double max_event_error = 0.0;  // |k_event^2 - critical value|
  std::string message;
};

/// Cross-checks a molecule against the level-set oracle: events against its
/// critical levels, and torus-family counts against its alive edges at
/// `per_band` values of k inside each band between critical levels.
inline OracleReport verify_molecule(const Profile& p, double h, const Molecule& m,
                                    int per_band = 8, int grid_n = 2000,
                                    int samples = kOracleSamples) {
  const auto scan = bifurcation_scan(p, h, m.component, grid_n, samples);
  const auto s = sketch_potential(p, h, m.component, samples);
  const bool quotient = m.component.surface == Surface::ProjectivePlane;
  const auto levels = critical_levels(m);

  OracleReport rep;
  rep.events = static_cast<int>(scan.events.size());
  auto fail = [&](const std::string& msg) {
    rep.passed = false;
    throw Error(ErrorCode::OracleMismatch, msg);
  };

  std::vector<bool> matched(levels.size(), false);
  for (const auto& e : scan.events) {
    double best = INFINITY;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const double d = std::abs(e.k * e.k - levels[i] * levels[i]);
      if (d < best) {
        best = d;
        arg = i;
      }
    }
    if (!(best <= 1e-8))
      fail("oracle event at k=" + std::to_string(e.k) + " matches no critical level of the molecule");
    matched[arg] = true;
    rep.max_event_error = std::max(rep.max_event_error, best);
  }
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (!matched[i]) fail("critical level k=" + std::to_string(levels[i]) + " not seen by the oracle");

  std::vector<double> bounds{0.0};
  bounds.insert(bounds.end(), levels.begin(), levels.end());
  for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
    for (int j = 1; j <= per_band; ++j) {
      const double k = bounds[b] + (bounds[b + 1] - bounds[b]) * j / (per_band + 1);
      const int want = alive_edges(m, k);
      const int got = level_signature(s, k, quotient).count;
      ++rep.checked_k;
      if (want != got)
        fail("at k=" + std::to_string(k) + " the molecule has " + std::to_string(want) +
             " edges, the oracle counts " + std::to_string(got) + " torus families");
      if (alive_edges(m, -k) != got)
        fail("molecule is not mirror symmetric at k=" + std::to_string(-k));
    }
  }
  const double above = levels.empty() ? 1.0 : levels.back() * (1.0 + 1e-6) + 1e-9;
  if (level_signature(s, above, quotient).count != 0 || alive_edges(m, above) != 0)
    fail("tori survive above the top critical level");
  rep.message = std::to_string(rep.events) + " events, " + std::to_string(rep.checked_k) + " k samples";
  return rep;
}

// ---------------------------------------------------------------------------
// Flow

struct FlowReport {
  double max_dH = 0.0;
  double max_dK = 0.0;
  double r_min = INFINITY;
  double r_max = -INFINITY;
  PhasePoint final_state;
};

struct TrajectorySample {
  double t;
  PhasePoint x;
};

namespace oracle_detail {

inline PhasePoint field(const Profile& p, const PhasePoint& x) {
  const double f = eval_f(p, x.r);
  const double fp = eval_f_prime(p, x.r);
  PhasePoint d;
  d.p_r = x.p_phi * x.p_phi * fp / (f * f * f) - eval_V_prime(p, x.r);
  d.p_phi = 0.0;
  d.r = x.p_r;
  d.phi = x.p_phi / (f * f);
  return d;
}

inline PhasePoint axpy(const PhasePoint& x, double s, const PhasePoint& d) {
  return {x.p_r + s * d.p_r, x.p_phi + s * d.p_phi, x.r + s * d.r, x.phi + s * d.phi};
}

}  // namespace oracle_detail

/// Fixed-step RK4 for (p_r, p_phi, r, phi)' = (-dH/dr, 0, p_r, p_phi / f^2).
/// `record` (optional) receives every `stride`-th state.
inline FlowReport flow_integrate(const Profile& p, PhasePoint state, double dt, long steps,
                                 double r_guard = 1e-6,
                                 const std::function<void(const TrajectorySample&)>& record = {},
                                 long stride = 1) {
  using oracle_detail::axpy;
  using oracle_detail::field;
  const double guard = r_guard * p.L;
  auto check = [&](const PhasePoint& x) {
    if (!(x.r > guard && x.r < p.L - guard))
      throw Error(ErrorCode::PoleApproach, "trajectory reached r=" + std::to_string(x.r));
  };
  check(state);
  const double H0 = hamiltonian(p, state);
  const double K0 = state.p_phi;
  FlowReport rep;
  rep.r_min = rep.r_max = state.r;
  if (record) record({0.0, state});
  for (long i = 1; i <= steps; ++i) {
    const PhasePoint k1 = field(p, state);
    const PhasePoint k2 = field(p, axpy(state, 0.5 * dt, k1));
    const PhasePoint k3 = field(p, axpy(state, 0.5 * dt, k2));
    const PhasePoint k4 = field(p, axpy(state, dt, k3));
    state.p_r += dt / 6.0 * (k1.p_r + 2.0 * k2.p_r + 2.0 * k3.p_r + k4.p_r);
    state.p_phi += dt / 6.0 * (k1.p_phi + 2.0 * k2.p_phi + 2.0 * k3.p_phi + k4.p_phi);
    state.r += dt / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r);
    state.phi = reduce_angle(state.phi + dt / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi));
    check(state);
    rep.max_dH = std::max(rep.max_dH, std::abs(hamiltonian(p, state) - H0));
    rep.max_dK = std::max(rep.max_dK, std::abs(state.p_phi - K0));
    rep.r_min = std::min(rep.r_min, state.r);
    rep.r_max = std::max(rep.r_max, state.r);
    if (record && i % stride == 0) record({i * dt, state});
  }
  rep.final_state = state;
  return rep;
}

/// Delimited dump: one "t p_r p_phi r phi" line per sample.
inline void write_trajectory(std::ostream& os, const std::vector<TrajectorySample>& traj) {
  os << "# t p_r p_phi r phi\n";
  const auto old = os.precision(17);
  for (const auto& s : traj)
    os << s.t << ' ' << s.x.p_r << ' ' << s.x.p_phi << ' ' << s.x.r << ' ' << s.x.phi << '\n';
  os.precision(old);
}

/// Turning points r1 < r0 < r2 of the torus through r0: the nearest roots of
/// U_h = k^2 on either side, found by marching and bisection.
inline std::pair<double, double> turning_points(const Profile& p, double h, double k, double r0,
                                                int march = 1 << 14) {
  const double c = k * k;
  auto g = [&](double r) { return oracle_detail::u_direct(p, h, r) - c; };
  if (!(g(r0) > 0.0)) return {r0, r0};
  auto find = [&](double step) {
    double x = r0;
    double gx = g(x);
    for (int i = 0; i < march; ++i) {
      const double y = std::clamp(x + step, 0.0, p.L);
      const double gy = g(y);
      if (gy <= 0.0) {
        double lo = x, hi = y;
        while (std::abs(hi - lo) > 1e-14) {
          const double mid = 0.5 * (lo + hi);
          if (g(mid) > 0.0) lo = mid;
          else hi = mid;
        }
        return 0.5 * (lo + hi);
      }
      x = y;
      gx = gy;
    }
    (void)gx;
    return x;
  };
  const double step = p.L / march;
  return {find(-step), find(step)};
}

}  // namespace fzmol
