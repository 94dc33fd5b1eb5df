#include "diracnn/losses.hpp"

#include <cmath>
#include <sstream>

namespace diracnn {

namespace {

constexpr double kMinNorm = 1e-30;

double checked_norm(const Vector &phi, const Vector &w_phi) {
  const double den = phi.dot(w_phi);
  if (!(den >= kMinNorm)) {
    std::ostringstream msg;
    msg << "trial state has <phi|phi> = " << den << " < " << kMinNorm;
    throw DegenerateTrial(msg.str());
  }
  return den;
}

} // namespace

Objective inverse_rayleigh(const Vector &phi, const ShiftedInverse &inverse,
                           const RadialMesh &mesh) {
  const Vector w_phi = weighted(phi, mesh);
  const double den = checked_norm(phi, w_phi);
  const Vector y = inverse.solve(phi);
  const double num = w_phi.dot(y);
  const double value = num / den;
  Objective out;
  out.value = value;
  out.gradient = (weighted(y, mesh) + inverse.solve_transpose(w_phi) -
                  2.0 * value * w_phi) /
                 den;
  return out;
}

Objective direct_rayleigh(const Vector &phi, const DiracOperator &op,
                          const RadialMesh &mesh) {
  const Vector w_phi = weighted(phi, mesh);
  const double den = checked_norm(phi, w_phi);
  const Vector h_phi = op.apply(phi);
  const double value = w_phi.dot(h_phi) / den;
  Objective out;
  out.value = value;
  out.gradient = (weighted(h_phi, mesh) +
                  op.matrix().transpose() * w_phi - 2.0 * value * w_phi) /
                 den;
  return out;
}

Vector orthonormal_project(const Vector &phi, const std::vector<Vector> &lower,
                           const RadialMesh &mesh) {
  Vector out = phi;
  for (const Vector &state : lower) {
    out -= inner_product(state, phi, mesh) * state;
  }
  if (!(std::sqrt(std::abs(inner_product(out, out, mesh))) >= 1e-12)) {
    throw DegenerateTrial("trial state lies in the span of the lower states");
  }
  return out;
}

Vector orthonormal_project_transpose(const Vector &g,
                                     const std::vector<Vector> &lower,
                                     const RadialMesh &mesh) {
  // P = I - sum_i phi_i phi_i^T W, so P^T g = g - sum_i W phi_i (phi_i . g)
  Vector out = g;
  for (const Vector &state : lower) {
    out -= state.dot(g) * weighted(state, mesh);
  }
  return out;
}

} // namespace diracnn
