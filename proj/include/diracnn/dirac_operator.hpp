#pragma once

#include "diracnn/mesh.hpp"
#include "diracnn/potential.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace diracnn {

/// Large (F) and small (G) radial components on the interior mesh points.
struct RadialSpinor {
  Vector F;
  Vector G;

  Eigen::Index size() const { return F.size(); }
  /// (F, G) stacked into one vector of length 2(M-1).
  Vector stacked() const;
  static RadialSpinor unstack(const Vector &phi);
};

double inner_product(const RadialSpinor &a, const RadialSpinor &b,
                     const RadialMesh &mesh);
double norm(const RadialSpinor &a, const RadialMesh &mesh);
RadialSpinor normalized(const RadialSpinor &a, const RadialMesh &mesh);

/// Flips the global sign so that the first local extremum of F is positive.
RadialSpinor sign_fixed(const RadialSpinor &a);

class SingularShift : public std::runtime_error {
public:
  explicit SingularShift(const std::string &what) : std::runtime_error(what) {}
};

class DiracSeaEntry : public std::runtime_error {
public:
  explicit DiracSeaEntry(const std::string &what)
      : std::runtime_error(what) {}
};

/// Discretized H'_Dr for one kappa block, acting on stacked (F, G):
///
///   [ diag(V+S)                    kin (-D + diag(kappa/r)) ]
///   [ kin (D + diag(kappa/r))      diag(V-S - 2 m c^2)      ]
///
/// Stored sparse; every row has at most four non-zeros.
class DiracOperator {
public:
  DiracOperator(const RadialMesh &mesh, const Potentials &potentials,
                int kappa, Units units);

  const RadialMesh &mesh() const { return mesh_; }
  const Potentials &potentials() const { return potentials_; }
  int kappa() const { return kappa_; }
  const Units &units() const { return units_; }
  Eigen::Index dimension() const { return matrix_.rows(); }

  const SparseMatrix &matrix() const { return matrix_; }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix_); }
  Vector apply(const Vector &phi) const { return matrix_ * phi; }

private:
  RadialMesh mesh_;
  Potentials potentials_;
  int kappa_;
  Units units_;
  SparseMatrix matrix_;
};

/// LU factorization of (shift I - H). The F/G unknowns are interleaved
/// internally so the matrix is banded with three sub- and super-diagonals;
/// each solve is then linear in the mesh size.
class ShiftedInverse {
public:
  ShiftedInverse(const DiracOperator &op, double shift);

  double shift() const { return shift_; }
  Eigen::Index dimension() const { return dimension_; }
  /// Reciprocal 1-norm condition estimate of (shift I - H).
  double rcond() const { return rcond_; }

  /// x = (shift I - H)^{-1} b
  Vector solve(const Vector &b) const;
  /// x = (shift I - H)^{-T} b
  Vector solve_transpose(const Vector &b) const;

private:
  Vector solve_impl(const Vector &b, char trans) const;

  double shift_;
  Eigen::Index dimension_;
  double rcond_ = 0.0;
  std::vector<double> band_;
  std::vector<int> pivots_;
};

/// Linear map F -> G of the lower row of the Dirac equation at a frozen
/// energy:  G_i = kin [(D F)_i + kappa F_i / r_i] / (eps - V_i + S_i + 2mc^2).
/// The energy is a constant of the map, not a variable of it.
class SmallComponentMap {
public:
  SmallComponentMap(const RadialMesh &mesh, const Potentials &potentials,
                    int kappa, Units units);

  /// Throws DiracSeaEntry when a denominator is not positive.
  void set_energy(double energy);
  double energy() const { return energy_; }

  Vector apply(const Vector &F) const;
  Vector apply_transpose(const Vector &g) const;

private:
  Vector upper_;
  Vector lower_;
  Vector centrifugal_;
  Vector offset_;
  double kinetic_;
  double energy_ = 0.0;
  Vector scale_;
};

Vector reconstruct_small(const Vector &F, double energy,
                         const Potentials &potentials, const RadialMesh &mesh,
                         int kappa, Units units);

} // namespace diracnn
