#pragma once

// Text report, JSON mirror and DOT graph of classified energies.
// Output depends only on the records, so equal inputs give equal bytes.

#include <fmt/format.h>

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "fzmol/labels.hpp"
#include "fzmol/pipeline.hpp"
#include "fzmol/profile.hpp"

namespace fzmol {

inline std::string num(double x) { return fmt::format("{:.12g}", x); }

inline std::string eps_str(int e) { return e > 0 ? "1" : "-1"; }

/// One-line canonical description used to detect changes along a sweep.
inline std::string molecule_signature(const LabeledMolecule& lm) {
  const auto& m = lm.molecule;
  std::string s = to_string(m.component.projection);
  s += ":";
  for (const auto& a : m.atoms) s += " " + atom_name(a) + (a.is_central ? "c" : "");
  for (std::size_t i = 0; i < m.edges.size(); ++i)
    s += fmt::format(" {}-{}[{},{}]", m.edges[i].src, m.edges[i].dst, lm.edges[i].r.str(),
                     eps_str(lm.edges[i].eps));
  for (const auto& f : lm.families) s += fmt::format(" n={}", f.n);
  return s;
}

inline std::string energy_signature(const EnergyRecord& r) {
  std::string s;
  for (const auto& c : r.components) s += molecule_signature(c.labeled) + ";";
  return s;
}

struct Transition {
  double h_below = 0.0;
  double h_above = 0.0;
};

/// Consecutive classified energies with different molecules; rejected
/// energies in between are stepped over.
inline std::vector<Transition> sweep_transitions(const std::vector<EnergyRecord>& recs) {
  std::vector<Transition> out;
  const EnergyRecord* prev = nullptr;
  for (const auto& r : recs) {
    if (r.status != EnergyStatus::Ok && r.status != EnergyStatus::Empty) continue;
    if (prev && energy_signature(*prev) != energy_signature(r)) out.push_back({prev->h, r.h});
    prev = &r;
  }
  return out;
}

inline std::string matrix_str(const GluingMatrix& g) { return to_string(g); }

inline std::string text_report(const Profile& p, const std::vector<EnergyRecord>& recs) {
  std::string out;
  auto line = [&out](const std::string& s) {
    out += s;
    out += '\n';
  };
  line("fzmol report");
  line("surface " + std::string(to_string(p.surface)));
  line("L " + num(p.L));
  for (const auto& [j, a] : p.f_coeffs) line(fmt::format("f {} {}", j, num(a)));
  for (const auto& [j, b] : p.v_coeffs) line(fmt::format("V {} {}", j, num(b)));

  for (const auto& r : recs) {
    line("");
    line(fmt::format("energy h={} status={} components={}", num(r.h), to_string(r.status),
                     r.components.size()));
    if (r.error) line(fmt::format("  error {}", r.message));
    for (std::size_t ci = 0; ci < r.components.size(); ++ci) {
      const auto& lm = r.components[ci].labeled;
      const auto& m = lm.molecule;
      const auto& c = m.component;
      line(fmt::format("  component {} interval [{}, {}] ends {}/{} projection {}", ci, num(c.a),
                       num(c.b), to_string(c.left_end), to_string(c.right_end),
                       to_string(c.projection)));
      for (const auto& cp : c.crit_points)
        line(fmt::format("    critical r={} U={} {}{}", num(cp.r), num(cp.value), to_string(cp.kind),
                         cp.is_central ? " central" : ""));
      for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        const auto& a = m.atoms[i];
        line(fmt::format("    atom {} {} k={}{}", i, atom_name(a), num(a.level_k),
                         a.is_central ? " central" : ""));
      }
      for (std::size_t i = 0; i < m.edges.size(); ++i) {
        const auto& e = m.edges[i];
        const auto& el = lm.edges[i];
        line(fmt::format("    edge {}->{} matrix {} r={} eps={}{}", e.src, e.dst, matrix_str(el.matrix),
                         el.r.str(), eps_str(el.eps), e.is_central_edge ? " crosses k=0" : ""));
      }
      for (const auto& f : lm.families) {
        std::string atoms;
        for (int a : f.atoms) atoms += (atoms.empty() ? "" : ",") + std::to_string(a);
        line(fmt::format("    family atoms={} n={}", atoms, f.n));
      }
      line("    topology " + lm.topology.str());
      if (lm.topalov.applicable)
        line(fmt::format("    topalov {} n~={} {}", lm.topalov.ok ? "pass" : "FAIL", lm.topalov.n_tilde.str(),
                         lm.topalov.note));
      else
        line("    topalov n/a");
      const auto& o = r.components[ci].oracle;
      line(o ? fmt::format("    oracle {} {}", o->passed ? "pass" : "FAIL", o->message)
             : std::string("    oracle off"));
    }
  }
  if (recs.size() > 1) {
    line("");
    for (const auto& t : sweep_transitions(recs))
      line(fmt::format("transition between h={} and h={}", num(t.h_below), num(t.h_above)));
    for (const auto& r : recs)
      if (r.status == EnergyStatus::Skipped) line(fmt::format("skipped h={}", num(r.h)));
  }
  return out;
}

inline nlohmann::ordered_json to_json(const LabeledMolecule& lm) {
  using nlohmann::ordered_json;
  const auto& m = lm.molecule;
  const auto& c = m.component;
  ordered_json j;
  j["interval"] = {c.a, c.b};
  j["ends"] = {to_string(c.left_end), to_string(c.right_end)};
  j["projection"] = to_string(c.projection);
  ordered_json crits = ordered_json::array();
  for (const auto& cp : c.crit_points)
    crits.push_back({{"r", cp.r}, {"value", cp.value}, {"kind", to_string(cp.kind)},
                     {"central", cp.is_central}});
  j["critical_points"] = crits;
  ordered_json atoms = ordered_json::array();
  for (const auto& a : m.atoms)
    atoms.push_back({{"type", atom_name(a)}, {"k", a.level_k}, {"central", a.is_central},
                     {"stars", a.stars}});
  j["atoms"] = atoms;
  ordered_json edges = ordered_json::array();
  for (std::size_t i = 0; i < m.edges.size(); ++i) {
    const auto& e = m.edges[i];
    const auto& g = lm.edges[i].matrix;
    edges.push_back({{"src", e.src},
                     {"dst", e.dst},
                     {"crosses_zero", e.is_central_edge},
                     {"matrix", {{g.a, g.b}, {g.c, g.d}}},
                     {"r", lm.edges[i].r.str()},
                     {"eps", lm.edges[i].eps}});
  }
  j["edges"] = edges;
  ordered_json fams = ordered_json::array();
  for (const auto& f : lm.families) fams.push_back({{"atoms", f.atoms}, {"n", f.n}});
  j["families"] = fams;
  j["topology"] = lm.topology.str();
  if (lm.topalov.applicable)
    j["topalov"] = {{"ok", lm.topalov.ok}, {"n_tilde", lm.topalov.n_tilde.str()},
                    {"N", lm.topalov.N.str()}, {"expected", lm.topalov.expected}};
  else
    j["topalov"] = nullptr;
  return j;
}

inline nlohmann::ordered_json json_report(const Profile& p, const std::vector<EnergyRecord>& recs) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["surface"] = to_string(p.surface);
  j["L"] = p.L;
  ordered_json f = ordered_json::array(), v = ordered_json::array();
  for (const auto& [jj, a] : p.f_coeffs) f.push_back({jj, a});
  for (const auto& [jj, b] : p.v_coeffs) v.push_back({jj, b});
  j["f"] = f;
  j["V"] = v;
  ordered_json energies = ordered_json::array();
  for (const auto& r : recs) {
    ordered_json e;
    e["h"] = r.h;
    e["status"] = to_string(r.status);
    e["error"] = r.error ? ordered_json(to_string(*r.error)) : ordered_json(nullptr);
    e["message"] = r.message;
    ordered_json comps = ordered_json::array();
    for (const auto& c : r.components) {
      auto cj = to_json(c.labeled);
      if (c.oracle)
        cj["oracle"] = {{"ok", c.oracle->passed}, {"events", c.oracle->events},
                        {"checked_k", c.oracle->checked_k}, {"max_event_error", c.oracle->max_event_error}};
      else
        cj["oracle"] = nullptr;
      comps.push_back(cj);
    }
    e["components"] = comps;
    energies.push_back(e);
  }
  j["energies"] = energies;
  ordered_json tr = ordered_json::array();
  for (const auto& t : sweep_transitions(recs)) tr.push_back({t.h_below, t.h_above});
  j["transitions"] = tr;
  return j;
}

/// DOT digraph of the labeled molecules of one energy.
inline std::string emit_graph(const std::vector<LabeledMolecule>& mols, const std::string& name = "molecule") {
  std::string out = "digraph " + name + " {\n";
  if (mols.empty()) out += "  // empty isoenergy level\n";
  for (std::size_t ci = 0; ci < mols.size(); ++ci) {
    const auto& lm = mols[ci];
    const auto& m = lm.molecule;
    out += fmt::format("  // component {} {} {}\n", ci, to_string(m.component.projection), lm.topology.str());
    auto node = [ci](int i) { return fmt::format("c{}a{}", ci, i); };
    for (std::size_t fi = 0; fi < lm.families.size(); ++fi) {
      out += fmt::format("  subgraph cluster_c{}f{} {{\n    label=\"n={}\";\n", ci, fi, lm.families[fi].n);
      for (int a : lm.families[fi].atoms) out += "    " + node(a) + ";\n";
      out += "  }\n";
    }
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
      const auto& a = m.atoms[i];
      out += fmt::format("  {} [label=\"{}\"{}];\n", node(static_cast<int>(i)), atom_name(a),
                         a.is_central ? ", central=true" : "");
    }
    for (std::size_t i = 0; i < m.edges.size(); ++i) {
      const auto& e = m.edges[i];
      out += fmt::format("  {} -> {} [label=\"r={}, ε={}\"];\n", node(e.src), node(e.dst),
                         lm.edges[i].r.str(), eps_str(lm.edges[i].eps));
    }
  }
  out += "}\n";
  return out;
}

inline std::string emit_graph(const EnergyRecord& r) {
  std::vector<LabeledMolecule> mols;
  for (const auto& c : r.components) mols.push_back(c.labeled);
  return emit_graph(mols);
}

}  // namespace fzmol
