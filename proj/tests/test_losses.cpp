#include "diracnn/losses.hpp"
#include "diracnn/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace diracnn;

namespace {

std::vector<Vector> orthonormal_set(const RadialMesh &mesh, int count, std::uint64_t seed) {
  std::vector<Vector> out;
  const Eigen::Index n = 2 * static_cast<Eigen::Index>(mesh.size());
  for (int k = 0; k < count; ++k) {
    Vector v = testing::random_vector(n, seed + static_cast<std::uint64_t>(k));
    for (const Vector &u : out) {
      v -= inner_product(u, v, mesh) * u;
    }
    out.push_back(v / std::sqrt(inner_product(v, v, mesh)));
  }
  return out;
}

} // namespace

TEST_CASE("inverse quotient at an eigenvector") {
  const RadialMesh mesh = testing::small_log_mesh(100);
  const DiracOperator op = testing::hydrogen_operator(mesh);
  const ShiftedInverse inverse(op, -0.51);
  const EigenPair ground = shift_invert_eigs(op, inverse, 1)[0];
  const Vector v = ground.state.stacked();
  const Objective q = inverse_rayleigh(3.0 * v, inverse, mesh);
  CHECK(q.value == doctest::Approx(1.0 / (-0.51 - ground.energy)).epsilon(1e-10));
  CHECK(energy_from_inverse(-0.51, q.value) == doctest::Approx(ground.energy).epsilon(1e-10));
  // stationary point: the gradient vanishes
  CHECK(q.gradient.norm() < 1e-8 * std::abs(q.value) * v.norm());
}

TEST_CASE("inverse quotient of the paper's hydrogen ground state") {
  const RadialMesh mesh = RadialMesh::log_mesh(-10.0, std::log(20.0 + std::exp(-10.0)), 1700);
  const DiracOperator op = testing::hydrogen_operator(mesh);
  const ShiftedInverse inverse(op, -0.51);
  const EigenPair ground = shift_invert_eigs(op, inverse, 1)[0];
  const double q = inverse_rayleigh(ground.state.stacked(), inverse, mesh).value;
  CHECK(q == doctest::Approx(-100.06661030540085).epsilon(1e-6));
}

TEST_CASE("inverse quotient is bounded below by the lowest inverse eigenvalue") {
  const RadialMesh mesh = testing::small_log_mesh(100);
  const DiracOperator op = testing::hydrogen_operator(mesh);
  const double shift = -0.51;
  const ShiftedInverse inverse(op, shift);
  // eigenvalues of H from the symmetrized dense matrix
  const Eigen::Index n = static_cast<Eigen::Index>(mesh.size());
  Vector sw(2 * n);
  sw.head(n) = mesh.weights().cwiseSqrt();
  sw.tail(n) = sw.head(n);
  const Eigen::MatrixXd S = sw.asDiagonal() * op.dense() * sw.cwiseInverse().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (S + S.transpose()));
  double lowest = INFINITY;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    lowest = std::min(lowest, 1.0 / (shift - eig.eigenvalues()[i]));
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vector phi = testing::random_vector(2 * n, seed);
    CHECK(inverse_rayleigh(phi, inverse, mesh).value >= lowest * (1.0 + 1e-12));
  }
}

TEST_CASE("Rayleigh quotient of an eigenvector does not depend on the weights") {
  const RadialMesh mesh = testing::small_log_mesh(100);
  const DiracOperator op = testing::hydrogen_operator(mesh);
  const EigenPair ground = shift_invert_eigs(op, -0.51, 1)[0];
  const Vector v = ground.state.stacked();
  const double plain = v.dot(op.apply(v)) / v.dot(v);
  const double quad = direct_rayleigh(v, op, mesh).value;
  CHECK(testing::relative(plain, quad) <= 1e-10);
  CHECK(testing::relative(quad, ground.energy) <= 1e-10);
}

TEST_CASE("degenerate trial states are rejected") {
  const RadialMesh mesh = testing::small_log_mesh(40);
  const DiracOperator op = testing::hydrogen_operator(mesh);
  const ShiftedInverse inverse(op, -0.51);
  const Vector zero = Vector::Zero(op.dimension());
  CHECK_THROWS_AS(inverse_rayleigh(zero, inverse, mesh), DegenerateTrial);
  CHECK_THROWS_AS(direct_rayleigh(zero, op, mesh), DegenerateTrial);
}

TEST_CASE("orthonormal projection") {
  const RadialMesh mesh = testing::small_log_mesh(100);
  const std::vector<Vector> lower = orthonormal_set(mesh, 3, 10);
  const Eigen::Index dim = lower[0].size();

  SUBCASE("projected vectors are orthogonal to every lower state") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const Vector p = orthonormal_project(testing::random_vector(dim, 1000 + seed), lower, mesh);
      for (const Vector &u : lower) {
        CHECK(std::abs(inner_product(u, p, mesh)) <= 1e-10);
      }
      const Vector pp = orthonormal_project(p, lower, mesh);
      CHECK((pp - p).cwiseAbs().maxCoeff() <= 1e-10 * p.cwiseAbs().maxCoeff());
    }
  }

  SUBCASE("a lower state projects to nothing") {
    CHECK_THROWS_AS(orthonormal_project(lower[1], lower, mesh), DegenerateTrial);
  }

  SUBCASE("an orthogonal vector is unchanged") {
    const std::vector<Vector> four = orthonormal_set(mesh, 4, 10);
    const Vector p = orthonormal_project(four[3], lower, mesh);
    CHECK((p - four[3]).cwiseAbs().maxCoeff() <= 1e-14);
  }

  SUBCASE("transpose") {
    const Vector a = testing::random_vector(dim, 1);
    const Vector b = testing::random_vector(dim, 2);
    CHECK(b.dot(orthonormal_project(a, lower, mesh)) ==
          doctest::Approx(orthonormal_project_transpose(b, lower, mesh).dot(a)).epsilon(1e-12));
  }
}
