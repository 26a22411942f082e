#pragma once

// Admissible bases, gluing matrices and the labels r, eps, n of a molecule, plus
// the topology of the isoenergy component.
//
// Every boundary torus carries the cycles alpha_r (radial oscillation, r-dot > 0
// for p_r > 0) and alpha_phi (phi-dot > 0). On involution-invariant tori the
// quotient lattice is refined by (alpha_r +- alpha_phi)/2, so cycle coefficients
// are half-integers; all gluing matrices must still come out integral.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "fzmol/effective.hpp"
#include "fzmol/error.hpp"
#include "fzmol/molecule.hpp"

namespace fzmol {

// ---------------------------------------------------------------------------
// Exact arithmetic

class Rational {
 public:
  constexpr Rational(std::int64_t num = 0, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }
  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  constexpr bool is_integer() const { return den_ == 1; }

  /// Largest integer not above the value.
  constexpr std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  constexpr Rational frac() const { return *this - Rational(floor()); }

  friend constexpr Rational operator+(Rational x, Rational y) {
    return {x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_};
  }
  friend constexpr Rational operator-(Rational x, Rational y) {
    return {x.num_ * y.den_ - y.num_ * x.den_, x.den_ * y.den_};
  }
  friend constexpr Rational operator*(Rational x, Rational y) {
    return {x.num_ * y.num_, x.den_ * y.den_};
  }
  constexpr Rational operator-() const { return {-num_, den_}; }
  friend constexpr bool operator==(Rational x, Rational y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  std::int64_t num_;
  std::int64_t den_;
};

/// c_r alpha_r + c_phi alpha_phi, stored as twice the coefficients.
struct Cycle {
  int r2 = 0;
  int phi2 = 0;

  Rational c_r() const { return {r2, 2}; }
  Rational c_phi() const { return {phi2, 2}; }
  friend bool operator==(const Cycle&, const Cycle&) = default;
};

constexpr Cycle operator-(Cycle x, Cycle y) { return {x.r2 - y.r2, x.phi2 - y.phi2}; }

struct BasisExpr {
  Cycle lambda;
  Cycle mu;
  friend bool operator==(const BasisExpr&, const BasisExpr&) = default;
};

inline std::string to_string(const Cycle& c) {
  auto term = [](int twice, const char* name) -> std::string {
    if (twice == 0) return "";
    const Rational q(twice, 2);
    if (q == Rational(1)) return name;
    if (q == Rational(-1)) return std::string("-") + name;
    return q.str() + "*" + name;
  };
  std::string a = term(c.r2, "a_r"), b = term(c.phi2, "a_phi");
  if (a.empty() && b.empty()) return "0";
  if (a.empty()) return b;
  if (b.empty()) return a;
  return b.front() == '-' ? a + " - " + b.substr(1) : a + " + " + b;
}

// The symmetry (p_r, p_phi, r, phi) -> (p_r, -p_phi, r, -phi) maps K > 0 to K < 0 and
// alpha_phi to -alpha_phi while keeping alpha_r; bases for K < 0 are the K > 0 formulas
// transported by it.
inline Cycle flip_phi(Cycle c) { return {c.r2, -c.phi2}; }

inline constexpr Cycle kAlphaR{2, 0};
inline constexpr Cycle kAlphaPhi{0, 2};

/// Admissible basis for an elliptic atom A on the side `side` (+1: K > 0, -1: K < 0).
inline BasisExpr admissible_basis_elliptic(const Atom& atom, int side) {
  if (atom.kind != AtomKind::A)
    throw Error(ErrorCode::NotAnAtomA, "elliptic basis requested for " + atom_name(atom));
  BasisExpr b{kAlphaR, atom.is_central ? Cycle{1, 1} : kAlphaPhi};
  if (side < 0) b.mu = flip_phi(b.mu);
  return b;
}

/// Admissible basis for a saddle atom on the boundary torus of the given role.
///
/// The inner tori of a star atom are not invariant under the involution, so they
/// keep the cycle alpha_r of the sphere double.
inline BasisExpr admissible_basis_saddle(const Atom& atom, TorusRole role, int side) {
  BasisExpr b;
  b.lambda = kAlphaPhi;
  switch (atom.kind) {
    case AtomKind::A:
      throw Error(ErrorCode::NotAnAtomA, "saddle basis requested for an atom A");
    case AtomKind::VStar:
      throw Error(ErrorCode::UnsupportedCentralAtom, "no admissible basis catalogued for V*_k");
    case AtomKind::AStar:
      if (role == TorusRole::Inner) b.mu = kAlphaR;
      else if (role == TorusRole::Outer) b.mu = {-1, 1};
      else throw Error(ErrorCode::UnsupportedCentralAtom, "A* has no central inner torus");
      break;
    case AtomKind::V:
      if (!atom.is_central) {
        if (role == TorusRole::Outer) b.mu = {-2, 0};
        else if (role == TorusRole::Inner) b.mu = kAlphaR;
        else throw Error(ErrorCode::UnsupportedCentralAtom, "noncentral saddle has no central torus");
      } else {
        if (role == TorusRole::Outer) b.mu = {-1, 1};
        else if (role == TorusRole::Inner) b.mu = kAlphaR;
        else if (role == TorusRole::InnerCentral) b.mu = {1, -1};
        else throw Error(ErrorCode::UnsupportedCentralAtom, "saddle edge without torus role");
      }
      break;
  }
  if (side < 0) {
    b.lambda = flip_phi(b.lambda);
    b.mu = flip_phi(b.mu);
  }
  return b;
}

inline BasisExpr admissible_basis(const Atom& atom, TorusRole role, int side) {
  return atom.kind == AtomKind::A ? admissible_basis_elliptic(atom, side)
                                  : admissible_basis_saddle(atom, role, side);
}

/// alpha_r(K > 0) = alpha_r(K < 0) - m * alpha_phi: m counts the poles on the
/// sphere double of the component that the tori sweep through at K = 0.
inline int alpha_r_monodromy(Projection proj) {
  switch (proj) {
    case Projection::FullRP2:
    case Projection::FullSphere: return 2;
    case Projection::Disk:
    case Projection::Cap: return 1;
    default: return 0;
  }
}

// ---------------------------------------------------------------------------
// Gluing matrices

/// (lambda_+, mu_+)^T = M (lambda_-, mu_-)^T, rows [[a, b], [c, d]].
struct GluingMatrix {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  std::int64_t det() const { return a * d - b * c; }
  /// Matrix of the same edge traversed backwards; det = -1 so the inverse is integral.
  GluingMatrix inverse() const {
    const std::int64_t D = det();
    return {d / D, -b / D, -c / D, a / D};
  }
  friend bool operator==(const GluingMatrix&, const GluingMatrix&) = default;
};

inline std::string to_string(const GluingMatrix& m) {
  return "[[" + std::to_string(m.a) + "," + std::to_string(m.b) + "],[" + std::to_string(m.c) +
         "," + std::to_string(m.d) + "]]";
}

namespace detail {

// Coefficients (x, y) with target = x * lambda + y * mu; throws unless integral.
inline std::pair<std::int64_t, std::int64_t> solve_in_basis(const BasisExpr& b, Cycle t) {
  const std::int64_t D = std::int64_t(b.lambda.r2) * b.mu.phi2 - std::int64_t(b.lambda.phi2) * b.mu.r2;
  if (D == 0) throw Error(ErrorCode::NonUnimodular, "degenerate basis");
  const std::int64_t x = std::int64_t(t.r2) * b.mu.phi2 - std::int64_t(t.phi2) * b.mu.r2;
  const std::int64_t y = std::int64_t(b.lambda.r2) * t.phi2 - std::int64_t(b.lambda.phi2) * t.r2;
  if (x % D != 0 || y % D != 0)
    throw Error(ErrorCode::NonIntegralGluing, "cycle " + to_string(t) + " is not integral in basis (" +
                                                  to_string(b.lambda) + ", " + to_string(b.mu) + ")");
  return {x / D, y / D};
}

}  // namespace detail

/// The projective A - A edge through both poles is reported in the gauge
/// mu_- -> mu_- - lambda_- of the lower atom A (mu of an atom A is defined up to
/// adding integer multiples of lambda); this is the representative (3 4; 1 1).
inline bool uses_full_rp2_gauge(const Molecule& m, const Edge& e) {
  return e.is_central_edge && m.quotient && m.poles == 2 && !m.atoms[e.src].is_saddle() &&
         !m.atoms[e.dst].is_saddle();
}

/// Expresses the admissible basis at the dst end of the edge through the one at the src end.
inline GluingMatrix gluing_matrix(const Molecule& m, const Edge& e) {
  const Atom& s = m.atoms[e.src];
  const Atom& t = m.atoms[e.dst];
  const int side_src = s.level_k > 0 ? 1 : -1;
  const int side_dst = t.level_k > 0 ? 1 : -1;
  BasisExpr lower = admissible_basis(s, e.role_at_src, side_src);
  BasisExpr upper = admissible_basis(t, e.role_at_dst, side_dst);

  if (e.is_central_edge) {
    // Rewrite the K > 0 cycles through alpha_r of the K < 0 side.
    const int mono = alpha_r_monodromy(m.component.projection);
    auto carry = [mono](Cycle c) { return Cycle{c.r2, c.phi2 - mono * c.r2}; };
    upper.lambda = carry(upper.lambda);
    upper.mu = carry(upper.mu);
    if (uses_full_rp2_gauge(m, e)) lower.mu = lower.mu - lower.lambda;
  }

  const auto [a, b] = detail::solve_in_basis(lower, upper.lambda);
  const auto [c, d] = detail::solve_in_basis(lower, upper.mu);
  GluingMatrix g{a, b, c, d};
  if (g.det() != -1)
    throw Error(ErrorCode::NonUnimodular, "gluing matrix " + to_string(g) + " has det " +
                                              std::to_string(g.det()));
  return g;
}

// ---------------------------------------------------------------------------
// Labels

/// r label: a rational in [0, 1) or infinity.
struct RLabel {
  bool infinite = true;
  Rational value;

  static RLabel inf() { return {}; }
  static RLabel of(Rational q) { return {false, q.frac()}; }
  friend bool operator==(const RLabel& x, const RLabel& y) {
    return x.infinite == y.infinite && (x.infinite || x.value == y.value);
  }
  std::string str() const { return infinite ? "inf" : value.str(); }
};

/// Global orientation of Q^3: reported r labels are (orientation * a/b) mod 1.
/// The value -1 is the choice under which the projective A - A molecule through
/// both poles reads r = 1/4 while the family label there stays n = -2.
inline constexpr int kOrientation = -1;

inline RLabel raw_r_label(const GluingMatrix& g) {
  return g.b == 0 ? RLabel::inf() : RLabel::of(Rational(g.a, g.b));
}

inline RLabel oriented_r_label(const GluingMatrix& g) {
  return g.b == 0 ? RLabel::inf() : RLabel::of(Rational(kOrientation * g.a, g.b));
}

/// eps = sign(b) when b != 0, else sign(a); read on the edge in its stored
/// (increasing k) direction.
inline int epsilon_label(const GluingMatrix& g) {
  if (g.b != 0) return g.b > 0 ? 1 : -1;
  return g.a > 0 ? 1 : -1;
}

struct EdgeLabels {
  GluingMatrix matrix;
  RLabel r;
  RLabel r_raw;
  int eps = 1;
};

struct Family {
  std::vector<int> atoms;
  std::vector<int> interior_edges;
  std::vector<int> boundary_edges;  // edges to atoms A
  int n = 0;
};

enum class TopologyKind { S3, S1xS2, RP3, Lens };

struct Topology {
  TopologyKind kind = TopologyKind::S3;
  int q = 0;  // lens space L_{q,p}
  int p = 0;

  static Topology lens(int q, int p) { return {TopologyKind::Lens, q, p}; }
  friend bool operator==(const Topology&, const Topology&) = default;

  std::string str() const {
    switch (kind) {
      case TopologyKind::S3: return "S3";
      case TopologyKind::S1xS2: return "S1xS2";
      case TopologyKind::RP3: return "RP3";
      case TopologyKind::Lens: return "L(" + std::to_string(q) + "," + std::to_string(p) + ")";
    }
    return "?";
  }
};

/// |H_1(Q^3)| when finite, 0 when infinite.
inline std::int64_t homology_order(const Topology& t) {
  switch (t.kind) {
    case TopologyKind::S3: return 1;
    case TopologyKind::RP3: return 2;
    case TopologyKind::Lens: return t.q;
    case TopologyKind::S1xS2: return 0;
  }
  return -1;
}

/// Homeomorphism type of lens spaces (orientation ignored): L_{q,p} = L_{q,p'}
/// iff p' = +-p^{+-1} mod q. S^3 = L_{1,0}, RP^3 = L_{2,1}.
inline bool same_manifold(const Topology& x, const Topology& y) {
  auto as_lens = [](const Topology& t) -> std::pair<int, int> {
    switch (t.kind) {
      case TopologyKind::S3: return {1, 0};
      case TopologyKind::RP3: return {2, 1};
      case TopologyKind::Lens: return {t.q, t.p};
      case TopologyKind::S1xS2: return {0, 1};
    }
    return {-1, -1};
  };
  auto [q1, p1] = as_lens(x);
  auto [q2, p2] = as_lens(y);
  if (q1 != q2) return false;
  if (q1 <= 2) return true;
  auto mod = [q1](long v) { return static_cast<int>(((v % q1) + q1) % q1); };
  for (int s : {1, -1}) {
    if (mod(p2 - s * p1) == 0) return true;
    if (mod(long(p1) * p2 - s) == 0) return true;
  }
  return false;
}

struct TopalovReport {
  bool applicable = false;
  bool ok = true;
  Rational n_tilde;
  Rational N;
  std::int64_t expected = 0;
  int stars = 0;
  std::string note;
};

struct LabeledMolecule {
  Molecule molecule;
  std::vector<EdgeLabels> edges;  // parallel to molecule.edges
  std::vector<Family> families;
  Topology topology;
  TopalovReport topalov;
  bool topalov_ok = true;
};

/// Topology of the component from its projection type.
inline Topology topology_of(Projection proj) {
  switch (proj) {
    case Projection::FullRP2: return Topology::lens(4, 1);
    case Projection::Disk:
    case Projection::Cap: return {TopologyKind::S3};
    case Projection::FullSphere: return {TopologyKind::RP3};
    default: return {TopologyKind::S1xS2};
  }
}

/// The 3-manifold glued from two solid tori along an A - A edge with label r.
inline Topology topology_from_r(const RLabel& r) {
  if (r.infinite) return {TopologyKind::S1xS2};
  if (r.value == Rational(0)) return {TopologyKind::S3};
  if (r.value == Rational(1, 2)) return {TopologyKind::RP3};
  return Topology::lens(static_cast<int>(r.value.den()), static_cast<int>(r.value.num()));
}

/// Projection-based topology, cross-checked against the r label on A - A molecules.
inline Topology classify_topology(Projection proj, const LabeledMolecule& lm) {
  const Topology t = topology_of(proj);
  if (lm.molecule.is_AA()) {
    const Topology from_r = topology_from_r(lm.edges.front().r);
    if (!same_manifold(t, from_r))
      throw Error(ErrorCode::InconsistentLabels, "A-A label r=" + lm.edges.front().r.str() +
                                                     " gives " + from_r.str() + ", projection gives " +
                                                     t.str());
  }
  return t;
}

/// Energy of the family compared with |H_1(Q^3)|:
/// n~ = n + sum of outward r over edges to atoms A + p/2 and N = 2^p * prod(beta) * n~.
inline TopalovReport topalov_check(const LabeledMolecule& lm) {
  TopalovReport rep;
  if (lm.molecule.is_AA()) {
    rep.note = "not applicable: A-A molecule has no family";
    return rep;
  }
  if (lm.families.size() != 1) {
    rep.note = "not applicable: " + std::to_string(lm.families.size()) + " families";
    return rep;
  }
  rep.applicable = true;
  const Family& fam = lm.families.front();
  const auto& mol = lm.molecule;
  Rational n_tilde(fam.n);
  std::int64_t beta = 1;
  for (int ei : fam.boundary_edges) {
    const Edge& e = mol.edges[ei];
    GluingMatrix g = lm.edges[ei].matrix;
    const bool outward = mol.atoms[e.src].is_saddle();
    if (!outward) g = g.inverse();
    n_tilde = n_tilde + Rational(g.a, g.b).frac();
    beta *= g.b < 0 ? -g.b : g.b;
  }
  for (int ai : fam.atoms) rep.stars += mol.atoms[ai].stars;
  n_tilde = n_tilde + Rational(rep.stars, 2);
  rep.n_tilde = n_tilde;
  rep.N = Rational(std::int64_t(1) << rep.stars) * Rational(beta) * n_tilde;
  rep.expected = homology_order(lm.topology);
  const std::int64_t absN = rep.N.num() < 0 ? -rep.N.num() : rep.N.num();
  rep.ok = rep.N.is_integer() && absN == rep.expected;
  rep.note = "N=" + rep.N.str() + " |H1|=" + (rep.expected ? std::to_string(rep.expected) : "inf");
  return rep;
}

/// Gluing matrices, r/eps per edge, n per family, topology and the Topalov check.
inline LabeledMolecule compute_labels(const Molecule& m) {
  LabeledMolecule lm;
  lm.molecule = m;
  for (const auto& e : m.edges) {
    EdgeLabels el;
    el.matrix = gluing_matrix(m, e);
    el.r_raw = raw_r_label(el.matrix);
    el.r = oriented_r_label(el.matrix);
    el.eps = epsilon_label(el.matrix);
    lm.edges.push_back(el);
  }

  // Families: connected components of the saddle atoms.
  const int na = static_cast<int>(m.atoms.size());
  detail::DisjointSets ds(na);
  for (const auto& e : m.edges)
    if (m.atoms[e.src].is_saddle() && m.atoms[e.dst].is_saddle()) ds.unite(e.src, e.dst);
  std::vector<int> fam_of(na, -1);
  for (int i = 0; i < na; ++i) {
    if (!m.atoms[i].is_saddle()) continue;
    const int root = ds.find(i);
    if (fam_of[root] < 0) {
      fam_of[root] = static_cast<int>(lm.families.size());
      lm.families.emplace_back();
    }
    lm.families[fam_of[root]].atoms.push_back(i);
  }
  for (int ei = 0; ei < static_cast<int>(m.edges.size()); ++ei) {
    const Edge& e = m.edges[ei];
    const bool ss = m.atoms[e.src].is_saddle(), ds_ = m.atoms[e.dst].is_saddle();
    if (!ss && !ds_) continue;
    const int anchor = ss ? e.src : e.dst;
    Family& f = lm.families[fam_of[ds.find(anchor)]];
    const GluingMatrix& g = lm.edges[ei].matrix;
    if (ss && ds_) {
      f.interior_edges.push_back(ei);
      f.n += static_cast<int>(Rational(-g.c, g.a).floor());
    } else {
      // Edges to atoms A are read pointing out of the family.
      f.boundary_edges.push_back(ei);
      const GluingMatrix out = ss ? g : g.inverse();
      f.n += static_cast<int>(Rational(out.a, out.b).floor());
    }
  }

  lm.topology = classify_topology(m.component.projection, lm);
  lm.topalov = topalov_check(lm);
  lm.topalov_ok = lm.topalov.ok;
  return lm;
}

}  // namespace fzmol
