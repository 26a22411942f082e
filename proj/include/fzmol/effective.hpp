#pragma once

// Effective potential U_h(r) = 2 f(r)^2 (h - V(r)), its critical points, and the
// decomposition of the isoenergy level into component intervals.
//
// A Liouville torus {H = h, K = k} with k != 0 is a connected component of
// {U_h > k^2} times the phi-circle, so the whole foliation is read off U_h.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fzmol/error.hpp"
#include "fzmol/profile.hpp"

namespace fzmol {

struct Tolerances {
  double tol_grad = 1e-10;
  double tol_hess = 1e-8;
  double tol_value = 1e-9;
  int grid_n = 4096;
};

enum class CritKind { LocalMax, LocalMin, Degenerate };

constexpr const char* to_string(CritKind k) {
  switch (k) {
    case CritKind::LocalMax: return "LocalMax";
    case CritKind::LocalMin: return "LocalMin";
    case CritKind::Degenerate: return "Degenerate";
  }
  return "?";
}

struct CriticalPoint {
  double r = 0.0;
  double value = 0.0;
  CritKind kind = CritKind::Degenerate;
  bool is_central = false;
  double hessian = 0.0;
};

enum class EndKind { Pole, RegularZero, Center };

constexpr const char* to_string(EndKind e) {
  switch (e) {
    case EndKind::Pole: return "Pole";
    case EndKind::RegularZero: return "RegularZero";
    case EndKind::Center: return "Center";
  }
  return "?";
}

enum class Projection { FullRP2, Disk, Mobius, Annulus, FullSphere, Cap, Band };

constexpr const char* to_string(Projection p) {
  switch (p) {
    case Projection::FullRP2: return "FullRP2";
    case Projection::Disk: return "Disk";
    case Projection::Mobius: return "Mobius";
    case Projection::Annulus: return "Annulus";
    case Projection::FullSphere: return "FullSphere";
    case Projection::Cap: return "Cap";
    case Projection::Band: return "Band";
  }
  return "?";
}

/// A maximal interval [a, b] of {V <= h}, cut to [0, L/2] on RP^2 and [0, L] on S^2.
struct ComponentInterval {
  double a = 0.0;
  double b = 0.0;
  EndKind left_end = EndKind::Pole;
  EndKind right_end = EndKind::RegularZero;
  Projection projection = Projection::Disk;
  Surface surface = Surface::ProjectivePlane;
  std::vector<CriticalPoint> crit_points;
};

/// The r-interval covered on the sphere double. Projective components that reach
/// the center are the quotient of the symmetric interval (a, L - a).
inline std::pair<double, double> sphere_span(const Profile& p, const ComponentInterval& c) {
  if (c.surface == Surface::ProjectivePlane && c.right_end == EndKind::Center)
    return {c.a, p.L - c.a};
  return {c.a, c.b};
}

/// Invariant under r -> L - r (contains the equator r = L/2).
inline bool is_symmetric(const Profile& p, const ComponentInterval& c) {
  auto [lo, hi] = sphere_span(p, c);
  return lo < 0.5 * p.L && 0.5 * p.L < hi;
}

/// Number of poles on the sphere double of the component.
inline int poles_crossed(const Profile& p, const ComponentInterval& c) {
  auto [lo, hi] = sphere_span(p, c);
  return (lo == 0.0 ? 1 : 0) + (hi == p.L ? 1 : 0);
}

// ---------------------------------------------------------------------------

inline double effective_potential(const Profile& p, double h, double r) {
  const double f = eval_f(p, r);
  return 2.0 * f * f * (h - eval_V(p, r));
}

inline double effective_potential_prime(const Profile& p, double h, double r) {
  const double f = eval_f(p, r);
  const double fp = eval_f_prime(p, r);
  return 4.0 * f * fp * (h - eval_V(p, r)) - 2.0 * f * f * eval_V_prime(p, r);
}

inline double effective_potential_second(const Profile& p, double h, double r) {
  const double f = eval_f(p, r);
  const double fp = eval_f_prime(p, r);
  const double fpp = eval_f_second(p, r);
  const double w = h - eval_V(p, r);
  return 4.0 * (fp * fp + f * fpp) * w - 8.0 * f * fp * eval_V_prime(p, r) -
         2.0 * f * f * eval_V_second(p, r);
}

namespace detail {

template <class F>
double bisect(F&& fn, double lo, double hi, double flo, double width = 1e-12) {
  for (int it = 0; it < 200 && hi - lo > width; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Brackets of sign changes of fn over (lo, hi). Without include_ends only the
// interior grid nodes are used (fn may vanish identically at the ends); exact
// zeros at a node produce a degenerate bracket.
template <class F>
std::vector<std::pair<double, double>> sign_brackets(F&& fn, double lo, double hi, int n,
                                                     bool include_ends = false) {
  std::vector<std::pair<double, double>> out;
  const double dx = (hi - lo) / n;
  const int first = include_ends ? 0 : 1;
  const int last = include_ends ? n : n - 1;
  double xp = lo + first * dx;
  double fp = fn(xp);
  if (fp == 0.0 && !include_ends) out.emplace_back(xp, xp);
  for (int i = first + 1; i <= last; ++i) {
    const double x = i == n ? hi : lo + i * dx;
    const double fx = fn(x);
    if (fx == 0.0) {
      out.emplace_back(x, x);
    } else if (fp != 0.0 && (fx < 0.0) != (fp < 0.0)) {
      out.emplace_back(xp, x);
    }
    xp = x;
    fp = fx;
  }
  return out;
}

template <class F>
int count_sign_changes(F&& fn, double lo, double hi, int n) {
  return static_cast<int>(sign_brackets(fn, lo, hi, n).size());
}

inline double sampled_scale(const Profile& p, double h, double lo, double hi, int n) {
  double s = 0.0;
  for (int i = 0; i <= n; ++i)
    s = std::max(s, std::abs(effective_potential(p, h, lo + (hi - lo) * i / n)));
  return s;
}

}  // namespace detail

/// Roots of U_h' inside the component, polished and classified, sorted by r.
///
/// Projective components reaching the center report (a, L/2] with the center
/// always included; sphere components report the whole open interval.
inline std::vector<CriticalPoint> find_critical_points(const Profile& p, double h,
                                                       const ComponentInterval& comp,
                                                       const Tolerances& tol = {}) {
  const auto [lo, hi] = sphere_span(p, comp);
  const bool symmetric = is_symmetric(p, comp);
  const double center = 0.5 * p.L;
  const double end = symmetric ? center : hi;
  auto dU = [&](double r) { return effective_potential_prime(p, h, r); };

  const double scale = std::max(detail::sampled_scale(p, h, lo, hi, 1024), 1e-300);
  const int n = std::max(tol.grid_n, 16);

  auto brackets = detail::sign_brackets(dU, lo, end, n);
  if (detail::count_sign_changes(dU, lo, end, 2 * n + 1) != static_cast<int>(brackets.size()))
    throw Error(ErrorCode::MissedRootSuspicion,
                "critical point count of U_h changes under grid refinement; raise grid_n");

  std::vector<double> roots;
  for (auto [x0, x1] : brackets) {
    double r = x0;
    if (x1 > x0) {
      r = detail::bisect(dU, x0, x1, dU(x0));
      const double d2 = effective_potential_second(p, h, r);
      if (d2 != 0.0) {
        const double rn = r - dU(r) / d2;
        if (rn > x0 && rn < x1 && std::abs(dU(rn)) <= std::abs(dU(r))) r = rn;
      }
    }
    if (std::abs(dU(r)) > tol.tol_grad * std::max(scale, 1.0))
      throw Error(ErrorCode::MissedRootSuspicion,
                  "critical point near r=" + std::to_string(r) + " did not polish");
    if (!roots.empty() && std::abs(r - roots.back()) < 1e-10)
      throw Error(ErrorCode::MissedRootSuspicion, "two brackets polished to the same root");
    roots.push_back(r);
  }

  std::vector<CriticalPoint> out;
  auto classify = [&](double r, bool central) {
    CriticalPoint c;
    c.r = r;
    c.value = effective_potential(p, h, r);
    c.hessian = effective_potential_second(p, h, r);
    c.is_central = central;
    if (std::abs(c.hessian) <= tol.tol_hess * scale) {
      c.kind = CritKind::Degenerate;
      throw Error(ErrorCode::DegenerateCritical,
                  "U_h'' = " + std::to_string(c.hessian) + " at r=" + std::to_string(r) +
                      "; the integral is not Bott at this energy");
    }
    c.kind = c.hessian < 0.0 ? CritKind::LocalMax : CritKind::LocalMin;
    return c;
  };
  for (double r : roots) out.push_back(classify(r, false));
  if (symmetric) {
    out.push_back(classify(center, true));
    if (comp.surface == Surface::Sphere) {
      const std::size_t half = out.size() - 1;
      for (std::size_t i = half; i-- > 0;) {
        CriticalPoint m = out[i];
        m.r = p.L - m.r;
        out.push_back(m);
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const CriticalPoint& x, const CriticalPoint& y) { return x.r < y.r; });
  return out;
}

/// Maximal intervals of {V < h} with endpoint and projection types; crit_points filled.
inline std::vector<ComponentInterval> component_intervals(const Profile& p, double h,
                                                          const Tolerances& tol = {}) {
  const bool proj = p.surface == Surface::ProjectivePlane;
  const double end = proj ? 0.5 * p.L : p.L;
  const int n = std::max(tol.grid_n, 16);
  auto g = [&](double r) { return eval_V(p, r) - h; };
  auto dV = [&](double r) { return eval_V_prime(p, r); };
  const double vscale = std::max(1.0, std::abs(h));

  // Critical points of V: both poles, the equator, and interior roots of V'.
  std::vector<double> vcrit{0.0, 0.5 * p.L};
  if (!proj) vcrit.push_back(p.L);
  for (auto [x0, x1] : detail::sign_brackets(dV, 0.0, end, n))
    vcrit.push_back(x1 > x0 ? detail::bisect(dV, x0, x1, dV(x0)) : x0);
  for (double c : vcrit) {
    if (std::abs(g(c)) <= tol.tol_value * vscale)
      throw Error(ErrorCode::SingularEnergy,
                  "h = " + std::to_string(h) + " is a critical value of V (r=" + std::to_string(c) +
                      "); the isoenergy surface is singular");
  }

  std::vector<double> cuts{0.0};
  for (auto [x0, x1] : detail::sign_brackets(g, 0.0, end, n, true)) {
    const double r = x1 > x0 ? detail::bisect(g, x0, x1, g(x0), 1e-14) : x0;
    if (std::abs(dV(r)) <= tol.tol_value * vscale)
      throw Error(ErrorCode::SingularEnergy, "level V = h is tangent at r=" + std::to_string(r));
    cuts.push_back(r);
  }
  cuts.push_back(end);

  std::vector<ComponentInterval> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (g(0.5 * (a + b)) >= 0.0) continue;
    ComponentInterval c;
    c.a = a;
    c.b = b;
    c.surface = p.surface;
    c.left_end = (i == 0) ? EndKind::Pole : EndKind::RegularZero;
    if (i + 2 == cuts.size())
      c.right_end = proj ? EndKind::Center : EndKind::Pole;
    else
      c.right_end = EndKind::RegularZero;
    const bool at_a = c.left_end == EndKind::Pole;
    const bool at_b = c.right_end != EndKind::RegularZero;
    if (proj) {
      c.projection = at_a ? (at_b ? Projection::FullRP2 : Projection::Disk)
                          : (at_b ? Projection::Mobius : Projection::Annulus);
    } else {
      c.projection = (at_a && at_b) ? Projection::FullSphere
                     : (at_a || at_b) ? Projection::Cap
                                      : Projection::Band;
    }
    out.push_back(std::move(c));
  }

  // Every sub-level critical point of V must lie in some component; otherwise a
  // pair of close roots of V = h slipped through the grid.
  for (double c : vcrit) {
    if (c > end || g(c) >= 0.0) continue;
    const bool covered = std::any_of(out.begin(), out.end(),
                                     [&](const ComponentInterval& ci) { return ci.a <= c && c <= ci.b; });
    if (!covered)
      throw Error(ErrorCode::MissedRootSuspicion, "V < h near r=" + std::to_string(c) +
                                                      " but no component found; raise grid_n");
  }
  if (out.empty()) throw Error(ErrorCode::EmptyLevel, "V > h everywhere");

  for (auto& c : out) c.crit_points = find_critical_points(p, h, c, tol);
  return out;
}

struct BottCertificate {
  bool passed = true;
  double min_abs_hessian = 0.0;      // over all critical points, relative to max|U|
  double min_critical_value = 0.0;   // U_h at critical points (must stay > 0)
  double min_endpoint_slope = 0.0;   // |U_h'| at regular-zero endpoints
};

/// Non-degeneracy of every critical circle and transversality of the level
/// boundary; throws DegenerateCritical / SingularEnergy otherwise.
inline BottCertificate bott_certificate(const Profile& p, double h,
                                        const std::vector<ComponentInterval>& comps,
                                        const Tolerances& tol = {}) {
  BottCertificate cert;
  cert.min_abs_hessian = INFINITY;
  cert.min_critical_value = INFINITY;
  cert.min_endpoint_slope = INFINITY;
  for (const auto& c : comps) {
    const auto [lo, hi] = sphere_span(p, c);
    const double scale = std::max(detail::sampled_scale(p, h, lo, hi, 1024), 1e-300);
    for (const auto& cp : c.crit_points) {
      const double rel = std::abs(cp.hessian) / scale;
      cert.min_abs_hessian = std::min(cert.min_abs_hessian, rel);
      cert.min_critical_value = std::min(cert.min_critical_value, cp.value);
      if (cp.kind == CritKind::Degenerate || rel <= tol.tol_hess)
        throw Error(ErrorCode::DegenerateCritical, "degenerate critical circle at r=" +
                                                       std::to_string(cp.r));
      if (cp.value <= tol.tol_value)
        throw Error(ErrorCode::SingularEnergy,
                    "critical point of U_h on the zero level at r=" + std::to_string(cp.r));
    }
    for (auto [r, kind] : {std::pair{c.a, c.left_end}, std::pair{c.b, c.right_end}}) {
      if (kind != EndKind::RegularZero) continue;
      const double s = std::abs(effective_potential_prime(p, h, r));
      cert.min_endpoint_slope = std::min(cert.min_endpoint_slope, s);
      if (s <= tol.tol_grad)
        throw Error(ErrorCode::SingularEnergy, "U_h' vanishes at the zero r=" + std::to_string(r));
    }
  }
  return cert;
}

}  // namespace fzmol
