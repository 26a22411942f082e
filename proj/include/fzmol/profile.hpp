#pragma once

// Rotationally invariant metric profile f and potential V on S^2 or RP^2.
//
// f(r) = sum a_j sin(j pi r / L) over odd j, V(r) = sum b_j cos(2 pi j r / L).
// With odd j the extension of f is odd and 2L-periodic with f(r) = f(L - r);
// the cosine series for V is even and L-periodic. Smoothness at the poles then
// reduces to the single slope condition f'(0) = 1.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fzmol/error.hpp"

namespace fzmol {

enum class Surface { Sphere, ProjectivePlane };

constexpr const char* to_string(Surface s) {
  return s == Surface::Sphere ? "sphere" : "projective";
}

struct Harmonic {
  int j = 0;
  double amp = 0.0;
};

struct Profile {
  double L = std::numbers::pi;
  std::vector<Harmonic> f_coeffs;
  std::vector<Harmonic> v_coeffs;
  Surface surface = Surface::ProjectivePlane;
};

/// Phase-space point away from the poles; p_phi is the value of the linear integral K.
struct PhasePoint {
  double p_r = 0.0;
  double p_phi = 0.0;
  double r = 0.0;
  double phi = 0.0;
};

inline double reduce_angle(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double x = std::fmod(phi, two_pi);
  if (x < 0.0) x += two_pi;
  return x >= two_pi ? 0.0 : x;
}

// ---------------------------------------------------------------------------
// Evaluation. All derivatives are term-wise analytic.

inline double eval_f(const Profile& p, double r) {
  const double w = std::numbers::pi / p.L;
  double s = 0.0;
  for (const auto& [j, a] : p.f_coeffs) s += a * std::sin(j * w * r);
  return s;
}

inline double eval_f_prime(const Profile& p, double r) {
  const double w = std::numbers::pi / p.L;
  double s = 0.0;
  for (const auto& [j, a] : p.f_coeffs) s += a * j * w * std::cos(j * w * r);
  return s;
}

inline double eval_f_second(const Profile& p, double r) {
  const double w = std::numbers::pi / p.L;
  double s = 0.0;
  for (const auto& [j, a] : p.f_coeffs) {
    const double k = j * w;
    s -= a * k * k * std::sin(k * r);
  }
  return s;
}

inline double eval_V(const Profile& p, double r) {
  const double w = 2.0 * std::numbers::pi / p.L;
  double s = 0.0;
  for (const auto& [j, b] : p.v_coeffs) s += b * std::cos(j * w * r);
  return s;
}

inline double eval_V_prime(const Profile& p, double r) {
  const double w = 2.0 * std::numbers::pi / p.L;
  double s = 0.0;
  for (const auto& [j, b] : p.v_coeffs) s -= b * j * w * std::sin(j * w * r);
  return s;
}

inline double eval_V_second(const Profile& p, double r) {
  const double w = 2.0 * std::numbers::pi / p.L;
  double s = 0.0;
  for (const auto& [j, b] : p.v_coeffs) {
    const double k = j * w;
    s -= b * k * k * std::cos(k * r);
  }
  return s;
}

/// Hamiltonian p_r^2/2 + p_phi^2/(2 f^2) + V outside the poles.
inline double hamiltonian(const Profile& p, const PhasePoint& x) {
  const double f = eval_f(p, x.r);
  return 0.5 * x.p_r * x.p_r + 0.5 * x.p_phi * x.p_phi / (f * f) + eval_V(p, x.r);
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationCheck {
  std::string name;
  bool passed = true;
  double worst = 0.0;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool passed = true;
  ErrorCode first_error = ErrorCode::NonSmoothPole;
  std::string message;

  const ValidationCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

// g(x) = f(L x / pi) / sin(x), written through sin(jx)/sin(x) = 1 + 2 sum_{i<=m} cos(2ix),
// j = 2m + 1. g(0) = g(pi) = sum a_j j, and g > 0 on [0, pi] iff f > 0 on (0, L).
inline double reduced_metric(const Profile& p, double x) {
  double s = 0.0;
  for (const auto& [j, a] : p.f_coeffs) {
    const int m = (j - 1) / 2;
    double t = 1.0;
    for (int i = 1; i <= m; ++i) t += 2.0 * std::cos(2.0 * i * x);
    s += a * t;
  }
  return s;
}

inline double reduced_metric_lipschitz(const Profile& p) {
  double g = 0.0;
  for (const auto& [j, a] : p.f_coeffs) g += std::abs(a) * 0.5 * (double(j) * j - 1.0);
  return g;
}

// Returns false if a non-positive value was sampled or the cell could not be
// certified down to max_depth; `lowest` tracks the smallest sampled value.
inline bool certify_cell(const Profile& p, double x0, double g0, double x1, double g1,
                         double lip, int depth, double& lowest) {
  if (g0 <= 0.0 || g1 <= 0.0) return false;
  if (0.5 * (g0 + g1 - lip * (x1 - x0)) > 0.0) return true;
  if (depth == 0) return false;
  const double xm = 0.5 * (x0 + x1);
  const double gm = reduced_metric(p, xm);
  lowest = std::min(lowest, gm);
  return certify_cell(p, x0, g0, xm, gm, lip, depth - 1, lowest) &&
         certify_cell(p, xm, gm, x1, g1, lip, depth - 1, lowest);
}

}  // namespace detail

inline constexpr int kPositivitySamples = 4096;

/// Checks the pole slope, odd harmonics of f and positivity of f on (0, L).
inline ValidationReport validate(const Profile& p, double tol = 1e-9) {
  if (!(p.L > 0.0) || !std::isfinite(p.L))
    throw Error(ErrorCode::ConfigError, "profile half-period L must be positive and finite");
  for (const auto& [j, a] : p.f_coeffs)
    if (j <= 0 || !std::isfinite(a))
      throw Error(ErrorCode::ConfigError, "f harmonics need positive j and finite amplitude");
  for (const auto& [j, b] : p.v_coeffs)
    if (j < 0 || !std::isfinite(b))
      throw Error(ErrorCode::ConfigError, "V harmonics need j >= 0 and finite amplitude");

  ValidationReport rep;
  auto fail = [&](ValidationCheck& c, ErrorCode code, std::string msg) {
    c.passed = false;
    if (rep.passed) {
      rep.passed = false;
      rep.first_error = code;
      rep.message = std::move(msg);
    }
  };

  ValidationCheck even{"odd_harmonics", true, 0.0};
  for (const auto& [j, a] : p.f_coeffs)
    if (j % 2 == 0) even.worst += 1.0;
  if (even.worst > 0) fail(even, ErrorCode::EvenHarmonic, "f contains even harmonics");

  ValidationCheck slope{"pole_slope", true, 0.0};
  double sum = 0.0;
  for (const auto& [j, a] : p.f_coeffs) sum += a * j * std::numbers::pi / p.L;
  slope.worst = std::abs(sum - 1.0);
  if (slope.worst > tol)
    fail(slope, ErrorCode::NonSmoothPole, "f'(0) = " + std::to_string(sum) + ", expected 1");

  ValidationCheck pos{"positivity", true, 0.0};
  if (even.passed) {
    const double lip = detail::reduced_metric_lipschitz(p);
    const double dx = std::numbers::pi / kPositivitySamples;
    double lowest = detail::reduced_metric(p, 0.0);
    double prev = lowest;
    bool ok = true;
    for (int i = 1; i <= kPositivitySamples; ++i) {
      const double x = i * dx;
      const double g = detail::reduced_metric(p, x);
      lowest = std::min(lowest, g);
      if (ok && !detail::certify_cell(p, x - dx, prev, x, g, lip, 24, lowest)) ok = false;
      prev = g;
    }
    pos.worst = lowest;
    if (!ok) fail(pos, ErrorCode::NonPositiveMetric, "f is not certified positive on (0, L)");
  } else {
    pos.passed = false;
  }

  // Symmetry about L/2 holds by construction; recorded for the certificate.
  ValidationCheck sym{"mirror_symmetry", true, 0.0};
  for (int i = 0; i <= 256; ++i) {
    const double r = p.L * i / 256.0;
    sym.worst = std::max({sym.worst, std::abs(eval_f(p, r) - eval_f(p, p.L - r)),
                          std::abs(eval_V(p, r) - eval_V(p, p.L - r))});
  }

  rep.checks = {even, slope, pos, sym};
  return rep;
}

inline void require_valid(const Profile& p, double tol = 1e-9) {
  auto rep = validate(p, tol);
  if (!rep.passed) throw Error(rep.first_error, rep.message);
}

}  // namespace fzmol
