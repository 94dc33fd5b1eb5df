#pragma once

#include "diracnn/dirac_operator.hpp"
#include "diracnn/mesh.hpp"

#include <vector>

namespace diracnn {

/// Bound state of a Dirac electron in a point Coulomb field, Hartree units
/// with m = 1. Energies exclude the rest mass.
struct HydrogenState {
  int n = 1;
  int kappa = -1;
  double charge = 1.0;
  double speed_of_light = 137.035999;

  double energy = 0.0;        ///< E - c^2
  double s = 1.0;             ///< sqrt(kappa^2 - (Z/c)^2)
  double decay = 1.0;         ///< rho = decay * r
  double mu = 0.0;            ///< sqrt((c^2 - E) / (c^2 + E))
  std::vector<double> large;  ///< a_m
  std::vector<double> small;  ///< b_m

  /// Unnormalized F(r), G(r) and dF/dr from the series.
  double large_at(double r) const;
  double small_at(double r) const;
  double large_derivative_at(double r) const;
};

/// Throws std::invalid_argument unless -n <= kappa <= n-1, kappa != 0 and
/// Z/c < |kappa|.
void validate_hydrogen(int n, int kappa, double charge, double speed_of_light);

double hydrogen_energy(int n, int kappa, double charge = 1.0,
                       double speed_of_light = 137.035999);

HydrogenState hydrogen_state(int n, int kappa, double charge = 1.0,
                             double speed_of_light = 137.035999);

/// Analytic spinor sampled on the mesh and normalized with the mesh
/// quadrature, sign fixed so the first extremum of F is positive.
RadialSpinor hydrogen_wavefunction(int n, int kappa, double charge,
                                   double speed_of_light,
                                   const RadialMesh &mesh);

/// Sign changes of F, ignoring samples below relative_floor * max|F| so
/// that rounding noise in a decayed tail is not counted.
int count_nodes(const Vector &F, double relative_floor = 1e-3);

/// Orbital angular momentum l of a kappa block.
inline int orbital_l(int kappa) { return kappa < 0 ? -kappa - 1 : kappa; }

} // namespace diracnn
