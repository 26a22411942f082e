#pragma once

// Molecule (Reeb-type graph of the Liouville foliation) of one isoenergy component.
//
// The k > 0 half W is the merge tree of the superlevel sets {U_h > k^2}: a local
// maximum of U_h gives a terminal atom A, a cluster of local minima merging several
// intervals gives a saddle atom. The k < 0 half is the mirror image, and one edge
// crosses k = 0. On RP^2, components reaching the equator are quotiented by the
// involution r -> L - r acting on the sphere molecule.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "fzmol/effective.hpp"
#include "fzmol/error.hpp"
#include "fzmol/profile.hpp"

namespace fzmol {

enum class AtomKind { A, V, AStar, VStar };

struct Atom {
  AtomKind kind = AtomKind::A;
  int l = 0;        // V_l: edges on the high-|k| side; V*_k: k
  int circles = 1;  // critical circles after the quotient
  double level_k = 0.0;
  std::vector<double> crit_rs;  // radii on the sphere double, sorted
  bool is_central = false;
  int stars = 0;

  bool is_saddle() const { return kind != AtomKind::A; }
};

inline std::string atom_name(const Atom& a) {
  switch (a.kind) {
    case AtomKind::A: return "A";
    case AtomKind::AStar: return "A*";
    case AtomKind::V: return "V_" + std::to_string(a.l);
    case AtomKind::VStar: return "V*_" + std::to_string(a.l);
  }
  return "?";
}

/// Which boundary torus of a saddle atom an edge attaches to. Outer tori face
/// k = 0, inner ones face the A atoms; InnerCentral is the involution-invariant
/// inner torus of a central saddle without stars.
enum class TorusRole { None, Outer, Inner, InnerCentral };

constexpr const char* to_string(TorusRole r) {
  switch (r) {
    case TorusRole::None: return "None";
    case TorusRole::Outer: return "Outer";
    case TorusRole::Inner: return "Inner";
    case TorusRole::InnerCentral: return "InnerCentral";
  }
  return "?";
}

struct Edge {
  int src = 0;  // lower k
  int dst = 0;  // higher k
  bool is_central_edge = false;  // crosses k = 0
  bool central_torus = false;    // family mapped to itself by the involution
  TorusRole role_at_src = TorusRole::None;
  TorusRole role_at_dst = TorusRole::None;
};

struct Molecule {
  std::vector<Atom> atoms;
  std::vector<Edge> edges;
  ComponentInterval component;
  Surface mode = Surface::ProjectivePlane;
  bool quotient = false;  // built as the involution quotient of a symmetric sphere molecule
  int poles = 0;          // poles met by the torus family at k = 0

  bool is_AA() const { return atoms.size() == 2 && edges.size() == 1; }
};

/// Edges whose open k-interval contains k.
inline int alive_edges(const Molecule& m, double k) {
  int n = 0;
  for (const auto& e : m.edges)
    if (m.atoms[e.src].level_k < k && k < m.atoms[e.dst].level_k) ++n;
  return n;
}

/// Sorted distinct critical levels |k| > 0 of the molecule.
inline std::vector<double> critical_levels(const Molecule& m) {
  std::vector<double> ks;
  for (const auto& a : m.atoms)
    if (a.level_k > 0) ks.push_back(a.level_k);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

/// The k > 0 half: a tree whose root carries the edge that continues to k = 0.
struct HalfMolecule {
  std::vector<Atom> atoms;
  std::vector<Edge> edges;
  int root = -1;
};

namespace detail {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Number of intervals of {U_h > c} on (lo, hi), by locating the crossings of
// U_h = c on each monotone piece between consecutive critical points.
inline int tracked_interval_count(const Profile& p, double h, double lo, double hi,
                                  const std::vector<CriticalPoint>& crits, double c) {
  std::vector<std::pair<double, double>> nodes{{lo, 0.0}};
  for (const auto& cp : crits) nodes.emplace_back(cp.r, cp.value);
  nodes.emplace_back(hi, 0.0);
  auto g = [&](double r) { return effective_potential(p, h, r) - c; };
  int crossings = 0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double u0 = nodes[i].second - c, u1 = nodes[i + 1].second - c;
    if ((u0 < 0.0) == (u1 < 0.0)) continue;
    const double r = bisect(g, nodes[i].first, nodes[i + 1].first, u0);
    if (r <= nodes[i].first || r >= nodes[i + 1].first) return -1;
    ++crossings;
  }
  return crossings % 2 ? -1 : crossings / 2;
}

}  // namespace detail

/// Event-driven sweep of k^2 from max U_h down to 0 over the sphere interval (lo, hi).
///
/// `crits` must be every critical point of U_h in (lo, hi), sorted by r. Values
/// within tol_value form one critical level; minima at one level that merge a
/// connected set of intervals form a single saddle atom.
inline HalfMolecule build_sphere_half_molecule(const Profile& p, double h, double lo, double hi,
                                               const std::vector<CriticalPoint>& crits,
                                               const Tolerances& tol = {}) {
  const int n = static_cast<int>(crits.size());
  if (n == 0 || n % 2 == 0)
    throw Error(ErrorCode::InternalSweepMismatch, "U_h must alternate max/min starting with a max");
  for (int i = 0; i < n; ++i) {
    const CritKind want = (i % 2 == 0) ? CritKind::LocalMax : CritKind::LocalMin;
    if (crits[i].kind != want)
      throw Error(ErrorCode::InternalSweepMismatch,
                  "critical points of U_h do not alternate at r=" + std::to_string(crits[i].r));
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return crits[x].value > crits[y].value; });
  std::vector<std::vector<int>> levels;
  for (int idx : order) {
    if (levels.empty() || crits[levels.back().front()].value - crits[idx].value > tol.tol_value)
      levels.emplace_back();
    levels.back().push_back(idx);
  }

  HalfMolecule half;
  detail::DisjointSets comps(n);
  std::vector<int> top(n, -1);  // per component root: atom at the upper end of the open edge
  int live = 0;

  for (std::size_t li = 0; li < levels.size(); ++li) {
    const auto& lvl = levels[li];
    double mean = 0.0;
    for (int i : lvl) mean += crits[i].value;
    mean /= static_cast<double>(lvl.size());

    for (int i : lvl) {
      if (crits[i].kind != CritKind::LocalMax) continue;
      Atom a;
      a.kind = AtomKind::A;
      a.level_k = std::sqrt(mean);
      a.crit_rs = {crits[i].r};
      top[i] = static_cast<int>(half.atoms.size());
      half.atoms.push_back(a);
      ++live;
    }

    // Group the minima of this level by the connected set of intervals they merge.
    std::vector<int> mins;
    for (int i : lvl)
      if (crits[i].kind == CritKind::LocalMin) mins.push_back(i);
    std::sort(mins.begin(), mins.end());
    detail::DisjointSets groups(mins.size());
    for (std::size_t x = 0; x < mins.size(); ++x)
      for (std::size_t y = x + 1; y < mins.size(); ++y) {
        const int rx[2] = {comps.find(mins[x] - 1), comps.find(mins[x] + 1)};
        const int ry[2] = {comps.find(mins[y] - 1), comps.find(mins[y] + 1)};
        for (int u : rx)
          for (int v : ry)
            if (u == v) groups.unite(static_cast<int>(x), static_cast<int>(y));
      }
    std::map<int, std::vector<int>> by_group;
    for (std::size_t x = 0; x < mins.size(); ++x)
      by_group[groups.find(static_cast<int>(x))].push_back(mins[x]);

    for (const auto& [g, members] : by_group) {
      std::vector<int> roots;
      for (int m : members)
        for (int nb : {m - 1, m + 1}) {
          const int r = comps.find(nb);
          if (top[r] < 0)
            throw Error(ErrorCode::InternalSweepMismatch, "saddle merges an unborn interval");
          if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
        }
      if (roots.size() != members.size() + 1)
        throw Error(ErrorCode::InternalSweepMismatch, "saddle does not merge a tree of intervals");

      Atom s;
      s.kind = AtomKind::V;
      s.level_k = std::sqrt(mean);
      s.circles = static_cast<int>(members.size());
      s.l = static_cast<int>(roots.size());
      for (int m : members) s.crit_rs.push_back(crits[m].r);
      const int sid = static_cast<int>(half.atoms.size());
      half.atoms.push_back(s);
      for (int r : roots) {
        Edge e;
        e.src = sid;
        e.dst = top[r];
        e.role_at_src = TorusRole::Inner;
        e.role_at_dst = half.atoms[top[r]].is_saddle() ? TorusRole::Outer : TorusRole::None;
        half.edges.push_back(e);
      }
      for (int m : members) {
        comps.unite(m, m - 1);
        comps.unite(m + 1, m - 1);
      }
      top[comps.find(members.front())] = sid;
      live -= static_cast<int>(roots.size()) - 1;
    }

    // Root tracking below this level must see exactly the live intervals.
    const double next = li + 1 < levels.size() ? crits[levels[li + 1].front()].value : 0.0;
    const double c = 0.5 * (crits[lvl.back()].value + next);
    const int tracked = detail::tracked_interval_count(p, h, lo, hi, crits, c);
    if (tracked != live)
      throw Error(ErrorCode::InternalSweepMismatch,
                  "root tracking found " + std::to_string(tracked) + " intervals, sweep has " +
                      std::to_string(live));
  }
  if (live != 1) throw Error(ErrorCode::InternalSweepMismatch, "sweep did not end in one interval");
  half.root = top[comps.find(0)];
  return half;
}

namespace detail {

inline bool same_radii(const std::vector<double>& x, const std::vector<double>& y, double eps) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i] - y[i]) > eps) return false;
  return true;
}

// Quotient of a symmetric sphere half-molecule by r -> L - r.
inline HalfMolecule quotient_half(const HalfMolecule& sph, double L) {
  const int n = static_cast<int>(sph.atoms.size());
  const double eps = 1e-9 * L;
  std::vector<int> mirror(n, -1);
  for (int i = 0; i < n; ++i) {
    std::vector<double> m;
    for (double r : sph.atoms[i].crit_rs) m.push_back(L - r);
    std::sort(m.begin(), m.end());
    for (int j = 0; j < n; ++j)
      if (sph.atoms[j].kind == sph.atoms[i].kind && same_radii(m, sph.atoms[j].crit_rs, eps))
        mirror[i] = j;
    if (mirror[i] < 0)
      throw Error(ErrorCode::InternalSweepMismatch, "sphere molecule is not mirror symmetric");
  }

  HalfMolecule q;
  std::vector<int> qid(n, -1);
  for (int i = 0; i < n; ++i) {
    const int rep = std::min(i, mirror[i]);
    if (qid[rep] < 0) {
      const Atom& a = sph.atoms[rep];
      Atom b = a;
      if (mirror[rep] == rep) {
        b.is_central = true;
        const bool has_center = std::any_of(a.crit_rs.begin(), a.crit_rs.end(),
                                            [&](double r) { return std::abs(r - 0.5 * L) <= eps; });
        if (a.kind == AtomKind::V) {
          if (has_center && a.circles == 1) {
            b.kind = AtomKind::AStar;
            b.stars = 1;
          } else if (has_center) {
            throw Error(ErrorCode::UnsupportedCentralAtom,
                        "symmetric saddle with " + std::to_string(a.circles) +
                            " circles including the equator (V*_k quotient) is not catalogued");
          } else {
            b.circles = a.circles / 2;
          }
        }
      } else {
        for (double r : sph.atoms[mirror[rep]].crit_rs) b.crit_rs.push_back(r);
        std::sort(b.crit_rs.begin(), b.crit_rs.end());
      }
      qid[rep] = static_cast<int>(q.atoms.size());
      q.atoms.push_back(b);
    }
    qid[i] = qid[rep];
  }

  std::vector<std::pair<int, int>> seen;
  for (const auto& e : sph.edges) {
    const std::pair<int, int> key{qid[e.src], qid[e.dst]};
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    Edge f = e;
    f.src = key.first;
    f.dst = key.second;
    f.central_torus = mirror[e.src] == e.src && mirror[e.dst] == e.dst;
    const Atom& s = q.atoms[f.src];
    if (f.central_torus && s.kind == AtomKind::V && s.is_central) f.role_at_src = TorusRole::InnerCentral;
    q.edges.push_back(f);
  }
  for (int i = 0; i < static_cast<int>(q.atoms.size()); ++i) {
    if (!q.atoms[i].is_saddle()) continue;
    q.atoms[i].l = static_cast<int>(
        std::count_if(q.edges.begin(), q.edges.end(), [i](const Edge& e) { return e.src == i; }));
  }
  q.root = qid[sph.root];
  return q;
}

// W - W from the k > 0 half: mirror across k = 0 with reversed orientation.
inline Molecule assemble(const HalfMolecule& half, bool root_central) {
  const int n = static_cast<int>(half.atoms.size());
  std::vector<Atom> atoms;
  for (const auto& a : half.atoms) {
    Atom m = a;
    m.level_k = -a.level_k;
    atoms.push_back(m);
  }
  for (const auto& a : half.atoms) atoms.push_back(a);  // plus copy: index + n

  std::vector<Edge> edges;
  for (const auto& e : half.edges) {
    Edge plus = e;
    plus.src += n;
    plus.dst += n;
    edges.push_back(plus);
    Edge minus;
    minus.src = e.dst;
    minus.dst = e.src;
    minus.central_torus = e.central_torus;
    minus.role_at_src = e.role_at_dst;
    minus.role_at_dst = e.role_at_src;
    edges.push_back(minus);
  }
  Edge c;
  c.src = half.root;
  c.dst = half.root + n;
  c.is_central_edge = true;
  c.central_torus = root_central;
  c.role_at_src = c.role_at_dst = half.atoms[half.root].is_saddle() ? TorusRole::Outer : TorusRole::None;
  edges.push_back(c);

  // Canonical order: atoms by (k, smallest radius), edges by (src, dst).
  std::vector<int> idx(atoms.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int x, int y) {
    if (atoms[x].level_k != atoms[y].level_k) return atoms[x].level_k < atoms[y].level_k;
    return atoms[x].crit_rs.front() < atoms[y].crit_rs.front();
  });
  std::vector<int> pos(atoms.size());
  Molecule mol;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    pos[idx[i]] = static_cast<int>(i);
    mol.atoms.push_back(atoms[idx[i]]);
  }
  for (auto& e : edges) {
    e.src = pos[e.src];
    e.dst = pos[e.dst];
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::pair{x.src, x.dst} < std::pair{y.src, y.dst};
  });
  mol.edges = std::move(edges);
  return mol;
}

}  // namespace detail

/// Sphere-mode molecule of one component (also used verbatim for projective
/// Disk/Annulus components, whose preimage is two disjoint mirror copies).
inline Molecule build_sphere_molecule(const Profile& p, double h, const ComponentInterval& comp,
                                      const Tolerances& tol = {}) {
  const auto [lo, hi] = sphere_span(p, comp);
  const auto half = build_sphere_half_molecule(p, h, lo, hi, comp.crit_points, tol);
  Molecule m = detail::assemble(half, false);
  m.component = comp;
  m.mode = comp.surface;
  m.poles = poles_crossed(p, comp);
  return m;
}

/// Projective-mode molecule: Disk/Annulus reuse the sphere builder; Mobius and
/// FullRP2 build the symmetric sphere molecule and quotient it by the involution.
inline Molecule build_projective_molecule(const Profile& p, double h, const ComponentInterval& comp,
                                          const Tolerances& tol = {}) {
  if (!is_symmetric(p, comp)) return build_sphere_molecule(p, h, comp, tol);

  const auto [lo, hi] = sphere_span(p, comp);
  std::vector<CriticalPoint> full = comp.crit_points;
  for (const auto& cp : comp.crit_points) {
    if (cp.is_central) continue;
    CriticalPoint m = cp;
    m.r = p.L - cp.r;
    full.push_back(m);
  }
  std::sort(full.begin(), full.end(),
            [](const CriticalPoint& x, const CriticalPoint& y) { return x.r < y.r; });

  const auto sphere_half = build_sphere_half_molecule(p, h, lo, hi, full, tol);
  const auto half = detail::quotient_half(sphere_half, p.L);
  Molecule m = detail::assemble(half, true);
  m.component = comp;
  m.mode = Surface::ProjectivePlane;
  m.quotient = true;
  m.poles = poles_crossed(p, comp);
  return m;
}

inline Molecule build_molecule(const Profile& p, double h, const ComponentInterval& comp,
                               const Tolerances& tol = {}) {
  return comp.surface == Surface::ProjectivePlane ? build_projective_molecule(p, h, comp, tol)
                                                  : build_sphere_molecule(p, h, comp, tol);
}

/// One molecule per connected component of the isoenergy surface.
inline std::vector<Molecule> enumerate_isoenergy_components(const Profile& p, double h,
                                                            const Tolerances& tol = {}) {
  const auto comps = component_intervals(p, h, tol);
  bott_certificate(p, h, comps, tol);
  std::vector<Molecule> out;
  out.reserve(comps.size());
  for (const auto& c : comps) out.push_back(build_molecule(p, h, c, tol));
  return out;
}

}  // namespace fzmol
