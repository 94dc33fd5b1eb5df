#pragma once

#include "diracnn/dirac_operator.hpp"
#include "diracnn/mesh.hpp"

#include <stdexcept>
#include <vector>

namespace diracnn {

class DegenerateTrial : public std::runtime_error {
public:
  explicit DegenerateTrial(const std::string &what)
      : std::runtime_error(what) {}
};

/// A scalar objective of the stacked spinor and its gradient with respect to
/// that spinor.
struct Objective {
  double value = 0.0;
  Vector gradient;
};

/// <phi|(shift - H)^{-1}|phi> / <phi|phi> with weighted inner products. The
/// inverse operator need not be symmetric, so the gradient of the numerator
/// is W y + A^T W phi with one adjoint solve.
Objective inverse_rayleigh(const Vector &phi, const ShiftedInverse &inverse,
                           const RadialMesh &mesh);

/// <phi|H|phi> / <phi|phi>, no inversion.
Objective direct_rayleigh(const Vector &phi, const DiracOperator &op,
                          const RadialMesh &mesh);

/// Energy estimate from an inverse Rayleigh quotient.
inline double energy_from_inverse(double shift, double quotient) {
  return shift - 1.0 / quotient;
}

/// phi - sum_i <phi_i|phi> phi_i. Throws DegenerateTrial when the result
/// has norm below 1e-12.
Vector orthonormal_project(const Vector &phi, const std::vector<Vector> &lower,
                           const RadialMesh &mesh);

/// Transpose of the projection, for pulling gradients back through it.
Vector orthonormal_project_transpose(const Vector &g,
                                     const std::vector<Vector> &lower,
                                     const RadialMesh &mesh);

} // namespace diracnn
