#include "diracnn/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace diracnn {

RadialMesh RadialMesh::log_mesh(double x0, double x_max, int total_count) {
  if (total_count < 3) {
    throw std::invalid_argument("log mesh needs M >= 3, got " +
                                std::to_string(total_count));
  }
  if (!(x0 < x_max) || !std::isfinite(x0) || !std::isfinite(x_max)) {
    throw std::invalid_argument("log mesh bounds must satisfy x0 < x_max");
  }
  RadialMesh mesh;
  mesh.kind_ = MeshKind::log;
  mesh.total_count_ = total_count;
  mesh.x0_ = x0;
  mesh.dx_ = (x_max - x0) / total_count;
  mesh.box_ = std::exp(x_max) - std::exp(x0);

  const int n = total_count - 1;
  const double e0 = std::exp(x0);
  mesh.r_.resize(n);
  mesh.weights_.resize(n);
  mesh.upper_.resize(n);
  mesh.lower_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double ex = std::exp(x0 + (i + 1) * mesh.dx_);
    mesh.r_[i] = ex - e0;
    mesh.weights_[i] = ex * mesh.dx_;
    const double coeff = 1.0 / (2.0 * mesh.dx_ * ex);
    mesh.upper_[i] = coeff;
    mesh.lower_[i] = -coeff;
  }
  for (int i = 1; i < n; ++i) {
    if (!(mesh.r_[i] > mesh.r_[i - 1])) {
      throw std::invalid_argument("log mesh is not strictly increasing; "
                                  "step too small for x0");
    }
  }
  if (!(mesh.r_[0] > 0.0)) {
    throw std::invalid_argument("log mesh first point underflows to r = 0");
  }
  return mesh;
}

RadialMesh RadialMesh::uniform(double r_max, int total_count) {
  if (total_count < 3) {
    throw std::invalid_argument("uniform mesh needs M >= 3, got " +
                                std::to_string(total_count));
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw std::invalid_argument("uniform mesh needs r_max > 0");
  }
  RadialMesh mesh;
  mesh.kind_ = MeshKind::uniform;
  mesh.total_count_ = total_count;
  mesh.dr_ = r_max / total_count;
  mesh.box_ = r_max;

  const int n = total_count - 1;
  const double coeff = 1.0 / (2.0 * mesh.dr_);
  mesh.r_.resize(n);
  for (int i = 0; i < n; ++i) {
    mesh.r_[i] = (i + 1) * mesh.dr_;
  }
  mesh.weights_ = Vector::Constant(n, mesh.dr_);
  mesh.upper_ = Vector::Constant(n, coeff);
  mesh.lower_ = Vector::Constant(n, -coeff);
  return mesh;
}

Vector RadialMesh::derivative(const Vector &f) const {
  const Eigen::Index n = r_.size();
  if (f.size() != n) {
    throw std::invalid_argument("derivative: sample count does not match mesh");
  }
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double next = i + 1 < n ? f[i + 1] : 0.0;
    const double prev = i > 0 ? f[i - 1] : 0.0;
    out[i] = upper_[i] * next + lower_[i] * prev;
  }
  return out;
}

Vector RadialMesh::derivative_transpose(const Vector &f) const {
  const Eigen::Index n = r_.size();
  if (f.size() != n) {
    throw std::invalid_argument(
        "derivative_transpose: sample count does not match mesh");
  }
  // (D^T f)_j = upper_{j-1} f_{j-1} + lower_{j+1} f_{j+1}
  Vector out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double from_prev = j > 0 ? upper_[j - 1] * f[j - 1] : 0.0;
    const double from_next = j + 1 < n ? lower_[j + 1] * f[j + 1] : 0.0;
    out[j] = from_prev + from_next;
  }
  return out;
}

SparseMatrix RadialMesh::derivative_matrix() const {
  const Eigen::Index n = r_.size();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0) {
      entries.emplace_back(i, i - 1, lower_[i]);
    }
    if (i + 1 < n) {
      entries.emplace_back(i, i + 1, upper_[i]);
    }
  }
  SparseMatrix d(n, n);
  d.setFromTriplets(entries.begin(), entries.end());
  return d;
}

bool RadialMesh::same_grid(const RadialMesh &other) const {
  return kind_ == other.kind_ && total_count_ == other.total_count_ &&
         r_.size() == other.r_.size() && r_ == other.r_;
}

double inner_product(const Vector &a, const Vector &b, const RadialMesh &mesh) {
  const Eigen::Index n = static_cast<Eigen::Index>(mesh.size());
  if (a.size() != b.size()) {
    throw std::invalid_argument("inner_product: length mismatch");
  }
  const Vector &w = mesh.weights();
  if (a.size() == n) {
    return (w.array() * a.array() * b.array()).sum();
  }
  if (a.size() == 2 * n) {
    return (w.array() * a.head(n).array() * b.head(n).array()).sum() +
           (w.array() * a.tail(n).array() * b.tail(n).array()).sum();
  }
  throw std::invalid_argument("inner_product: vector is not sampled on mesh");
}

Vector weighted(const Vector &a, const RadialMesh &mesh) {
  const Eigen::Index n = static_cast<Eigen::Index>(mesh.size());
  const Vector &w = mesh.weights();
  if (a.size() == n) {
    return w.cwiseProduct(a);
  }
  if (a.size() == 2 * n) {
    Vector out(2 * n);
    out.head(n) = w.cwiseProduct(a.head(n));
    out.tail(n) = w.cwiseProduct(a.tail(n));
    return out;
  }
  throw std::invalid_argument("weighted: vector is not sampled on mesh");
}

} // namespace diracnn
