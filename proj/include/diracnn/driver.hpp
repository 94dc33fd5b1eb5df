#pragma once

#include "diracnn/config.hpp"
#include "diracnn/oracle.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace diracnn {

/// Spectroscopic label such as "2s1/2" or "1p3/2".
std::string state_label(int n, int kappa);

/// Interior zeros of F expected for the state: n - 1 - l for a Coulomb
/// principal number, n - 1 for a radial index.
int expected_nodes(int n, int kappa, bool principal);

struct Level {
  int kappa = -1;
  int n = 1; ///< radial index within the kappa block, 1 = nodeless
  EigenPair pair;
};

/// Oracle levels of one kappa block from just above the potential minimum
/// up to `cutoff`, in increasing energy.
std::vector<Level> kappa_levels(const DiracOperator &op, double cutoff);

/// Energy of the highest level occupied when `particles` fermions fill the
/// levels in order with 2j + 1 = 2|kappa| states each.
double fermi_energy(std::vector<Level> levels, int particles);

/// Inversion point for `levels[index]`: below it by a tenth of the gap to
/// the next lower level, and by at most 5% of its magnitude.
double auto_shift(const std::vector<Level> &same_kappa, std::size_t index);

/// Progress messages from long runs.
using Logger = std::function<void(const std::string &)>;

struct RunContext {
  RunConfig config;
  std::filesystem::path out_dir;
  Logger log;
};

/// Each returns the energies document that is also written to
/// <out>/energies.json.
nlohmann::json run_solve(const RunContext &ctx);
nlohmann::json run_spectrum(const RunContext &ctx);
nlohmann::json run_benchmark(const RunContext &ctx);
nlohmann::json run_ablation(const RunContext &ctx);

} // namespace diracnn
