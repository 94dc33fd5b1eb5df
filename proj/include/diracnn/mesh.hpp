#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>

namespace diracnn {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class MeshKind { log, uniform };

/// Radial grid restricted to the interior points 1..M-1. The Dirichlet
/// endpoints r = 0 and r = r_max are never stored.
///
/// The first-derivative matrix is the three-point central difference and is
/// kept as its two off-diagonals: row i reads
///   (D f)_i = upper_i * f_{i+1} + lower_i * f_{i-1}
/// with f_0 = f_M = 0.
class RadialMesh {
public:
  /// r(x) = e^x - e^{x0}, x uniform with step (x_max - x0) / M.
  static RadialMesh log_mesh(double x0, double x_max, int total_count);
  /// r = i * r_max / M.
  static RadialMesh uniform(double r_max, int total_count);

  MeshKind kind() const { return kind_; }
  /// M, the number of intervals.
  int total_count() const { return total_count_; }
  /// M - 1, the number of interior points.
  std::size_t size() const { return static_cast<std::size_t>(r_.size()); }

  const Vector &r() const { return r_; }
  const Vector &weights() const { return weights_; }
  const Vector &upper() const { return upper_; }
  const Vector &lower() const { return lower_; }

  double x0() const { return x0_; }
  double dx() const { return dx_; }
  double dr() const { return dr_; }
  double box() const { return box_; }

  Vector derivative(const Vector &f) const;
  Vector derivative_transpose(const Vector &f) const;
  SparseMatrix derivative_matrix() const;

  bool same_grid(const RadialMesh &other) const;

private:
  RadialMesh() = default;

  MeshKind kind_ = MeshKind::uniform;
  int total_count_ = 0;
  double x0_ = 0.0;
  double dx_ = 0.0;
  double dr_ = 0.0;
  double box_ = 0.0;
  Vector r_;
  Vector weights_;
  Vector upper_;
  Vector lower_;
};

/// Weighted sum  sum_i w_i a_i b_i. Vectors of length 2(M-1) are treated as
/// stacked (F, G) spinors and both halves use the same weights.
double inner_product(const Vector &a, const Vector &b, const RadialMesh &mesh);

/// Applies the quadrature weights to a scalar or stacked spinor vector.
Vector weighted(const Vector &a, const RadialMesh &mesh);

} // namespace diracnn
