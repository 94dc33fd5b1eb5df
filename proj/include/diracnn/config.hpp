#pragma once

#include "diracnn/mesh.hpp"
#include "diracnn/potential.hpp"
#include "diracnn/solver.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace diracnn {

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

struct SystemSection {
  std::string potential = "coulomb"; ///< coulomb | woods_saxon
  double charge = 1.0;
  double speed_of_light = 137.035999;
  WoodsSaxon woods_saxon;
  double hbar_c = 197.32698;
  double rest_energy = 939.0; ///< nucleon m c^2, MeV
  std::vector<int> kappa{-1};
  /// Coulomb: principal quantum number. Woods-Saxon: radial index within
  /// the kappa block (1 = nodeless).
  std::vector<int> n{1};
  /// Optional published energies, one per state, reported alongside.
  std::vector<double> reference;
  /// Spectrum cutoff; unset means "fill the neutrons" for Woods-Saxon.
  std::optional<double> fermi_energy;
  int max_kappa = 8;

  bool coulomb() const { return potential == "coulomb"; }
  PotentialSpec spec() const;
  Units units() const;
};

struct MeshSection {
  MeshKind kind = MeshKind::log;
  double x0 = -10.0;
  /// Box size r_max, one per state or a single shared value.
  std::vector<double> box{20.0};
  int count = 1700;

  RadialMesh build(double box_size) const;
};

struct NetworkSection {
  Architecture architecture = Architecture::fully_connected;
  int hidden = 16;
  TrialForm trial = TrialForm::reduced;
  std::uint64_t seed = 1;
};

struct TrainingSection {
  Method method = Method::inverse;
  /// Inversion points, one per state or a single shared value; empty means
  /// choose from the reference spectrum.
  std::vector<double> shift;
  int max_epochs = 200000;
  int window = 500;
  /// Unset: 1e-9 for Coulomb (Hartree), 1e-5 for Woods-Saxon (MeV).
  std::optional<double> tolerance;
  AdamOptions adam;
};

struct OutputSection {
  std::string directory = "out";
  bool wavefunctions = true;
  bool traces = true;
  bool checkpoints = true;
};

struct RunConfig {
  SystemSection system;
  MeshSection mesh;
  NetworkSection network;
  TrainingSection training;
  OutputSection output;

  double tolerance() const;
  /// Box for state i (shared when a single box is given).
  double box(std::size_t i) const;
  /// Explicit shift for state i, if any.
  std::optional<double> shift(std::size_t i) const;
  SolveConfig solve_config(double shift) const;
  nlohmann::json to_json() const;
};

/// Parses the INI-style configuration. Unknown sections or keys, malformed
/// values and inconsistent list lengths throw ConfigError.
RunConfig parse_config(std::istream &in);
RunConfig load_config(const std::string &path);

void validate(const RunConfig &config);

} // namespace diracnn
