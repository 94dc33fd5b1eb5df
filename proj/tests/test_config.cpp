#include "diracnn/config.hpp"

#include <doctest.h>

#include <sstream>

using namespace diracnn;

namespace {

RunConfig parse(const std::string &text) {
  std::istringstream in(text);
  return parse_config(in);
}

const char *kHydrogen = R"(
[system]
potential = coulomb
kappa = -1
n = 1, 2
[mesh]
kind = log
x0 = -10
box = 20, 40
count = 1700
[training]
shift = -0.51, -0.13
)";

} // namespace

TEST_CASE("a complete configuration parses") {
  const RunConfig cfg = parse(kHydrogen);
  CHECK(cfg.system.coulomb());
  CHECK(cfg.system.n == std::vector<int>{1, 2});
  CHECK(cfg.box(1) == 40.0);
  CHECK(*cfg.shift(0) == -0.51);
  CHECK(cfg.tolerance() == 1e-9);
  const SolveConfig sc = cfg.solve_config(-0.13);
  CHECK(sc.shift == -0.13);
  CHECK(sc.max_epochs == 200000);
  CHECK(sc.architecture == Architecture::fully_connected);
}

TEST_CASE("defaults fill missing sections and a shared box applies to every state") {
  const RunConfig cfg = parse("[system]\nn = 1, 2, 3\n");
  CHECK(cfg.box(2) == 20.0);
  CHECK_FALSE(cfg.shift(0).has_value());
  CHECK(cfg.output.directory == "out");
}

TEST_CASE("woods-saxon configuration uses MeV tolerances") {
  const RunConfig cfg = parse(R"(
[system]
potential = woods_saxon
neutrons = 126
protons = 82
fermi_energy = auto
[mesh]
kind = uniform
box = 20
count = 2000
)");
  CHECK_FALSE(cfg.system.coulomb());
  CHECK(cfg.system.woods_saxon.mass_number() == 208);
  CHECK_FALSE(cfg.system.fermi_energy.has_value());
  CHECK(cfg.tolerance() == 1e-5);
  CHECK(cfg.mesh.build(20.0).kind() == MeshKind::uniform);
}

TEST_CASE("strict parsing rejects anything unexpected") {
  CHECK_THROWS_AS(parse("[system]\nkapa = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[solver]\nmethod = inverse\n"), ConfigError);
  CHECK_THROWS_AS(parse("seed = 3\n[system]\n"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\nkappa =\n"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\nkappa = -1, 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\ncharge = one\n"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\npotential = yukawa\n"), ConfigError);
  CHECK_THROWS_AS(parse("[mesh]\nkind = cubic\n"), ConfigError);
  CHECK_THROWS_AS(parse("[mesh]\ncount = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("[network]\nseed = -4\n"), ConfigError);
  CHECK_THROWS_AS(parse("[network]\narchitecture = conv\n"), ConfigError);
  CHECK_THROWS_AS(parse("[training]\nmethod = newton\n"), ConfigError);
  CHECK_THROWS_AS(parse("[training]\nbeta1 = 1.0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[output]\ntraces = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\nn = 1, 2\n[mesh]\nbox = 20, 40, 60\n"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\nn = 1, 2\nreference = -0.5\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/run.ini"), ConfigError);
}

TEST_CASE("resolved configuration is embedded as json") {
  const nlohmann::json j = parse(kHydrogen).to_json();
  CHECK(j["system"]["potential"] == "coulomb");
  CHECK(j["mesh"]["box"] == nlohmann::json::array({20.0, 40.0}));
  CHECK(j["training"]["tolerance"] == 1e-9);
  CHECK(j["training"]["shift"][1] == -0.13);
  CHECK(parse("[training]\nshift = auto\n").to_json()["training"]["shift"] == "auto");
}
