#pragma once

#include <cmath>

#include "fzmol/molecule.hpp"

namespace fzmol::testing {

/// Molecule invariant under k -> -k: atom levels and kinds pair up, and every
/// edge has a mirror edge between the mirrored levels.
inline bool mirror_symmetric(const Molecule& m) {
  const int n = static_cast<int>(m.atoms.size());
  // Canonical order sorts by k, so atom i mirrors atom n-1-i up to ties.
  for (int i = 0; i < n; ++i) {
    const Atom& a = m.atoms[i];
    const Atom& b = m.atoms[n - 1 - i];
    if (std::abs(a.level_k + b.level_k) > 1e-12 || a.kind != b.kind) return false;
  }
  for (const auto& e : m.edges) {
    const int ms = n - 1 - e.dst, md = n - 1 - e.src;
    bool found = false;
    for (const auto& f : m.edges) {
      const bool same_k = std::abs(m.atoms[f.src].level_k - m.atoms[ms].level_k) < 1e-12 &&
                          std::abs(m.atoms[f.dst].level_k - m.atoms[md].level_k) < 1e-12;
      found = found || same_k;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace fzmol::testing
