#pragma once

#include "diracnn/dirac_operator.hpp"
#include "diracnn/potential.hpp"

#include <cmath>
#include <random>

namespace testing {

inline constexpr double kSpeedOfLight = 137.035999;

// Hydrogen on a coarse log mesh; small enough for dense checks.
inline diracnn::RadialMesh small_log_mesh(int M = 100, double box = 20.0) {
  return diracnn::RadialMesh::log_mesh(-10.0, std::log(box + std::exp(-10.0)),
                                       M);
}

inline diracnn::DiracOperator hydrogen_operator(const diracnn::RadialMesh &mesh,
                                                int kappa = -1) {
  return {mesh, diracnn::eval_potentials(diracnn::Coulomb{1.0}, mesh), kappa,
          diracnn::Units::atomic()};
}

inline diracnn::DiracOperator oxygen_operator(const diracnn::RadialMesh &mesh,
                                              int kappa) {
  return {mesh, diracnn::eval_potentials(diracnn::WoodsSaxon{}, mesh), kappa,
          diracnn::Units::nuclear()};
}

inline diracnn::Vector random_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  diracnn::Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = dist(engine);
  }
  return v;
}

inline double relative(double a, double b) {
  return std::abs(a - b) / std::abs(b);
}

} // namespace testing
