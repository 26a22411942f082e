// fzclassify: labeled molecule and isoenergy topology from a profile config.
//
// Exit codes: 0 ok, 1 config or usage error, 2 a cross-check failed
// (oracle, labels), 3 the energy is singular / non-Bott / unsupported.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "fzmol/config.hpp"
#include "fzmol/pipeline.hpp"
#include "fzmol/report.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "fzclassify: cannot write " << path << "\n";
    return false;
  }
  return true;
}

fzmol::EnergySweep parse_sweep(const std::string& s) {
  fzmol::EnergySweep sw;
  std::istringstream in(s);
  char c1 = 0, c2 = 0;
  if (!(in >> sw.h_min >> c1 >> sw.h_max >> c2 >> sw.samples) || c1 != ':' || c2 != ':' ||
      sw.samples < 1 || sw.h_max < sw.h_min)
    throw fzmol::Error(fzmol::ErrorCode::ConfigError, "--sweep expects MIN:MAX:SAMPLES, got '" + s + "'");
  return sw;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Liouville classification of geodesic flows with potential on S^2 and RP^2"};
  app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  std::string config_path, surface, sweep, graph_out, report_out, json_out;
  double h = 0.0;
  bool no_oracle = false;
  double tol_grad = 0.0, tol_hess = 0.0, tol_value = 0.0;
  int grid_n = 0;
  app.add_option("config", config_path, "YAML run configuration")->required();
  auto* surface_opt = app.add_option("--surface", surface, "override profile surface")
                          ->check(CLI::IsMember({"sphere", "projective"}));
  auto* h_opt = app.add_option("--h", h, "classify a single energy");
  auto* sweep_opt = app.add_option("--sweep", sweep, "energy sweep MIN:MAX:SAMPLES")->excludes(h_opt);
  app.add_flag("--no-oracle", no_oracle, "skip the brute-force level-set oracle");
  app.add_option("--graph-out", graph_out, "write the DOT graph here");
  app.add_option("--report-out", report_out, "write the text report here (default stdout)");
  app.add_option("--json-out", json_out, "write the JSON report here");
  auto* tg = app.add_option("--tol-grad", tol_grad)->check(CLI::PositiveNumber);
  auto* th = app.add_option("--tol-hess", tol_hess)->check(CLI::PositiveNumber);
  auto* tv = app.add_option("--tol-value", tol_value)->check(CLI::PositiveNumber);
  auto* tn = app.add_option("--grid-n", grid_n)->check(CLI::Range(16, 1 << 24));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  fzmol::RunConfig cfg;
  std::vector<double> energies;
  try {
    cfg = fzmol::load_config(config_path);
    if (*surface_opt)
      cfg.profile.surface = surface == "sphere" ? fzmol::Surface::Sphere : fzmol::Surface::ProjectivePlane;
    if (*h_opt) {
      cfg.h = h;
      cfg.sweep.reset();
    }
    if (*sweep_opt) {
      cfg.sweep = parse_sweep(sweep);
      cfg.h.reset();
    }
    if (*tg) cfg.tol.tol_grad = tol_grad;
    if (*th) cfg.tol.tol_hess = tol_hess;
    if (*tv) cfg.tol.tol_value = tol_value;
    if (*tn) cfg.tol.grid_n = grid_n;
    if (no_oracle) cfg.outputs.oracle = false;
    if (!graph_out.empty()) cfg.outputs.graph = graph_out;
    if (!report_out.empty()) cfg.outputs.report = report_out;
    if (!json_out.empty()) cfg.outputs.json = json_out;

    if (cfg.sweep) energies = fzmol::sweep_energies(cfg.sweep->h_min, cfg.sweep->h_max, cfg.sweep->samples);
    else if (cfg.h) energies = {*cfg.h};
    else throw fzmol::Error(fzmol::ErrorCode::ConfigError, config_path + ": no energy given (energy.h, --h or --sweep)");

    const auto rep = fzmol::validate(cfg.profile, 1e-9);
    if (!rep.passed) {
      std::cerr << "fzclassify: invalid profile: " << fzmol::to_string(rep.first_error) << ": " << rep.message << "\n";
      return 1;
    }
  } catch (const fzmol::Error& e) {
    std::cerr << "fzclassify: " << e.what() << "\n";
    return 1;
  }

  fzmol::RunOptions opt;
  opt.tol = cfg.tol;
  opt.oracle = cfg.outputs.oracle;
  const auto recs = fzmol::classify_energies(cfg.profile, energies, opt);

  const std::string text = fzmol::text_report(cfg.profile, recs);
  bool io_ok = true;
  if (cfg.outputs.report.empty()) std::cout << text;
  else io_ok = write_file(cfg.outputs.report, text) && io_ok;
  if (!cfg.outputs.json.empty())
    io_ok = write_file(cfg.outputs.json, fzmol::json_report(cfg.profile, recs).dump(2) + "\n") && io_ok;
  if (!cfg.outputs.graph.empty()) {
    std::string dot;
    for (const auto& r : recs) {
      dot += "// h=" + fzmol::num(r.h) + " " + fzmol::to_string(r.status) + "\n";
      dot += fzmol::emit_graph(r);
    }
    io_ok = write_file(cfg.outputs.graph, dot) && io_ok;
  }
  for (const auto& r : recs)
    if (r.status == fzmol::EnergyStatus::Skipped || r.status == fzmol::EnergyStatus::CheckFailed)
      std::cerr << "fzclassify: h=" << fzmol::num(r.h) << ": " << r.message << "\n";
  if (!io_ok) return 1;
  return fzmol::exit_status(recs);
}
