#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fzmol/config.hpp"
#include "fzmol/report.hpp"

namespace fs = std::filesystem;
using namespace fzmol;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string config(const std::string& name) { return std::string(FZMOL_CONFIG_DIR) + "/" + name; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fzcli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(FZCLASSIFY_PATH) + " " + args + " > " + (dir_ / "stdout").string() +
                            " 2> " + (dir_ / "stderr").string();
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }
  std::string out() const { return slurp(dir_ / "stdout"); }
  std::string err() const { return slurp(dir_ / "stderr"); }
  fs::path path(const std::string& name) const { return dir_ / name; }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  fs::path dir_;
};

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "cfg.yaml");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    return e.what();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return "";
}

}  // namespace

TEST(Config, ParsesFullExample) {
  const auto cfg = parse_config(R"(
profile:
  L: 2*pi/3
  surface: sphere
  f: [[1, 0.4], [3, 0.2]]
  V: [[0, 0.1], [2, -0.05]]
energy:
  sweep: {min: 0.1, max: 2.0, samples: 40}
tolerances: {tol_grad: 1e-11, grid_n: 1024}
outputs: {report: r.txt, graph: g.dot, oracle: false}
)");
  EXPECT_NEAR(cfg.profile.L, 2 * std::numbers::pi / 3, 1e-15);
  EXPECT_EQ(cfg.profile.surface, Surface::Sphere);
  ASSERT_EQ(cfg.profile.f_coeffs.size(), 2u);
  EXPECT_EQ(cfg.profile.f_coeffs[1].j, 3);
  EXPECT_EQ(cfg.profile.v_coeffs[1].amp, -0.05);
  EXPECT_FALSE(cfg.h);
  ASSERT_TRUE(cfg.sweep);
  EXPECT_EQ(cfg.sweep->samples, 40);
  EXPECT_EQ(cfg.tol.tol_grad, 1e-11);
  EXPECT_EQ(cfg.tol.tol_hess, 1e-8);  // default kept
  EXPECT_EQ(cfg.tol.grid_n, 1024);
  EXPECT_EQ(cfg.outputs.graph, "g.dot");
  EXPECT_FALSE(cfg.outputs.oracle);
}

TEST(Config, DefaultsAndPiForms) {
  for (const auto& [text, L] : {std::pair{"pi", std::numbers::pi}, std::pair{"2pi", 2 * std::numbers::pi},
                                std::pair{"pi/2", std::numbers::pi / 2}, std::pair{"1.5", 1.5}}) {
    const auto cfg = parse_config(std::string("profile: {L: ") + text + ", f: [[1, 1]]}\nenergy: {h: 1}\n");
    EXPECT_NEAR(cfg.profile.L, L, 1e-15) << text;
    EXPECT_EQ(cfg.profile.surface, Surface::ProjectivePlane);
    EXPECT_EQ(cfg.h, 1.0);
    EXPECT_EQ(cfg.tol.grid_n, 4096);
    EXPECT_EQ(cfg.tol.tol_value, 1e-9);
  }
}

TEST(Config, DiagnosticsNameLineAndField) {
  auto msg = config_error("profile:\n  f: [[1, 1]]\n  V: [[0, abc]]\n");
  EXPECT_NE(msg.find("cfg.yaml:3:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("profile.V[0].amplitude"), std::string::npos) << msg;

  msg = config_error("profile:\n  f: [[1, 1]]\n  colour: red\n");
  EXPECT_NE(msg.find("cfg.yaml:3:3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("unknown key"), std::string::npos) << msg;

  msg = config_error("profile:\n  f: [[1, 1]]\nenergy:\n  sweep: {min: 1, max: 0, samples: 3}\n");
  EXPECT_NE(msg.find("energy.sweep.max"), std::string::npos) << msg;

  msg = config_error("profile:\n  f: [[1, 1]]\ntolerances: {tol_hess: -1}\n");
  EXPECT_NE(msg.find("tolerances.tol_hess"), std::string::npos) << msg;

  msg = config_error("profile:\n  f: [[1, 1]\n");
  EXPECT_NE(msg.find("cfg.yaml:"), std::string::npos) << msg;

  EXPECT_NE(config_error("profile: {f: [[1, 1]], surface: torus}\n").find("profile.surface"), std::string::npos);
  EXPECT_NE(config_error("profile: {f: [[0, 1]]}\n").find("profile.f[0].j"), std::string::npos);
  EXPECT_NE(config_error("energy: {h: 1}\n").find("profile"), std::string::npos);
  EXPECT_NE(config_error("profile: {f: [[1, 1]]}\nenergy: {h: 1, sweep: {min: 0, max: 1, samples: 2}}\n")
                .find("energy"),
            std::string::npos);
}

TEST_F(Cli, RoundProfile) {
  const auto dot = path("g.dot"), json = path("r.json");
  ASSERT_EQ(run(config("round_rp2.yaml") + " --graph-out " + dot.string() + " --json-out " + json.string()), 0)
      << err();
  const std::string rep = out();
  EXPECT_NE(rep.find("status=ok components=1"), std::string::npos);
  EXPECT_NE(rep.find("projection FullRP2"), std::string::npos);
  EXPECT_NE(rep.find("matrix [[3,4],[1,1]] r=1/4 eps=1"), std::string::npos) << rep;
  EXPECT_NE(rep.find("topology L(4,1)"), std::string::npos) << rep;
  EXPECT_NE(rep.find("oracle pass"), std::string::npos);

  const std::string g = slurp(dot);
  int nodes = 0, edges = 0;
  std::istringstream in(g);
  for (std::string l; std::getline(in, l);) {
    nodes += l.find("[label=\"A") != std::string::npos;
    edges += l.find(" -> ") != std::string::npos;
  }
  EXPECT_EQ(nodes, 2);
  EXPECT_EQ(edges, 1);
  EXPECT_NE(g.find("r=1/4, ε=1"), std::string::npos) << g;

  const auto j = nlohmann::json::parse(slurp(json));
  ASSERT_EQ(j["energies"].size(), 1u);
  EXPECT_EQ(j["energies"][0]["status"], "ok");
}

TEST_F(Cli, StarProfileGraph) {
  const auto dot = path("g.dot");
  ASSERT_EQ(run(config("star.yaml") + " --graph-out " + dot.string()), 0) << err();
  const std::string g = slurp(dot);
  int nodes = 0, edges = 0;
  std::istringstream in(g);
  for (std::string l; std::getline(in, l);) {
    nodes += l.find("[label=\"A") != std::string::npos;
    edges += l.find(" -> ") != std::string::npos;
  }
  EXPECT_EQ(nodes, 4);
  EXPECT_EQ(edges, 3);
  EXPECT_NE(g.find("label=\"n=-2\""), std::string::npos) << g;
  EXPECT_NE(g.find("r=inf, ε=-1"), std::string::npos) << g;
  EXPECT_NE(out().find("topalov pass"), std::string::npos);
}

TEST_F(Cli, OutputIsDeterministic) {
  std::string first_report, first_graph;
  for (int i = 0; i < 2; ++i) {
    const auto rep = path("rep" + std::to_string(i)), dot = path("g" + std::to_string(i));
    ASSERT_EQ(run(config("disk_sweep.yaml") + " --report-out " + rep.string() + " --graph-out " + dot.string()), 0);
    if (i == 0) {
      first_report = slurp(rep);
      first_graph = slurp(dot);
    } else {
      EXPECT_EQ(first_report, slurp(rep));
      EXPECT_EQ(first_graph, slurp(dot));
    }
  }
  EXPECT_FALSE(first_report.empty());
}

TEST_F(Cli, SweepAcrossMaxV) {
  ASSERT_EQ(run(config("disk_sweep.yaml") + " --no-oracle"), 0) << err();
  const std::string rep = out();
  // V runs from 0 (poles) to 0.9; both are singular energies.
  EXPECT_NE(rep.find("skipped h=0\n"), std::string::npos) << rep;
  EXPECT_NE(rep.find("skipped h=0.9\n"), std::string::npos) << rep;
  EXPECT_NE(rep.find("energy h=0.8 status=ok"), std::string::npos);
  EXPECT_NE(rep.find("energy h=1 status=ok"), std::string::npos);
  EXPECT_NE(rep.find("transition between h=0.8 and h=1"), std::string::npos) << rep;
  EXPECT_NE(rep.find("oracle off"), std::string::npos);
  EXPECT_NE(err().find("h=0.9"), std::string::npos);
}

TEST_F(Cli, EmptyLevel) {
  const auto dot = path("g.dot");
  EXPECT_EQ(run(config("disk.yaml") + " --h -0.5 --graph-out " + dot.string()), 0) << err();
  EXPECT_NE(out().find("status=empty components=0"), std::string::npos);
  EXPECT_NE(slurp(dot).find("// empty isoenergy level"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run(config("disk.yaml") + " --h 0.9"), 3);  // h = max V
  EXPECT_EQ(run(config("mobius.yaml") + " --sweep 0.2:0.6:5 --surface sphere"), 0) << err();
  EXPECT_EQ(run(path("missing.yaml").string()), 1);
  EXPECT_EQ(run(config("disk.yaml") + " --bogus"), 1);
  EXPECT_EQ(run(config("disk.yaml") + " --h 1 --sweep 0:1:3"), 1);
  const auto bad = write("bad.yaml", "profile:\n  f: [[1, 1.0], [3, 0.3]]\nenergy: {h: 1}\n");
  EXPECT_EQ(run(bad.string()), 1);
  EXPECT_NE(err().find("NonSmoothPole"), std::string::npos) << err();
  const auto typo = write("typo.yaml", "profile:\n  f: [[1, 1.0]]\nenergy: {hh: 1}\n");
  EXPECT_EQ(run(typo.string()), 1);
  EXPECT_NE(err().find("typo.yaml:3:"), std::string::npos) << err();
}

TEST_F(Cli, SurfaceOverride) {
  ASSERT_EQ(run(config("star.yaml") + " --surface sphere"), 0) << err();
  EXPECT_NE(out().find("projection FullSphere"), std::string::npos);
  EXPECT_NE(out().find("topology RP3"), std::string::npos) << out();
}

TEST(Report, GraphIsByteStable) {
  Profile p;
  p.f_coeffs = {{1, 0.4}, {3, 0.2}};
  const auto a = emit_graph(classify_energy(p, 1.0));
  const auto b = emit_graph(classify_energy(p, 1.0));
  EXPECT_EQ(a, b);
  EXPECT_EQ(emit_graph(std::vector<LabeledMolecule>{}), "digraph molecule {\n  // empty isoenergy level\n}\n");
}
