#include "diracnn/mesh.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace diracnn;

TEST_CASE("log mesh points follow r = e^x - e^x0") {
  const RadialMesh mesh = RadialMesh::log_mesh(0.0, 1.0, 4);
  REQUIRE(mesh.size() == 3);
  CHECK(mesh.kind() == MeshKind::log);
  CHECK(mesh.dx() == doctest::Approx(0.25));
  CHECK(mesh.r()[1] == doctest::Approx(0.64872127070012815).epsilon(1e-15));
  CHECK(mesh.weights()[1] ==
        doctest::Approx(0.41218031767503204).epsilon(1e-15));
}

TEST_CASE("paper log mesh spans a 100 a.u. box") {
  const double x1 = std::log(100.0 + std::exp(-10.0));
  const RadialMesh mesh = RadialMesh::log_mesh(-10.0, x1, 1700);
  CHECK(mesh.size() == 1699);
  CHECK(mesh.box() == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("uniform mesh spacing and weights") {
  const RadialMesh mesh = RadialMesh::uniform(20.0, 2000);
  CHECK(mesh.dr() == doctest::Approx(0.01));
  CHECK(mesh.size() == 1999);
  CHECK(mesh.r()[0] == doctest::Approx(0.01));
  CHECK(mesh.r()[1998] == doctest::Approx(19.99));
  CHECK(mesh.weights().minCoeff() == doctest::Approx(0.01));
}

TEST_CASE("mesh points are positive and strictly increasing") {
  for (const RadialMesh &mesh :
       {RadialMesh::log_mesh(-10.0, 4.9, 1700), RadialMesh::uniform(20.0, 50),
        RadialMesh::log_mesh(-3.0, 2.0, 3)}) {
    CHECK(mesh.r()[0] > 0.0);
    for (Eigen::Index i = 1; i < mesh.r().size(); ++i) {
      CHECK(mesh.r()[i] > mesh.r()[i - 1]);
    }
    CHECK(mesh.weights().minCoeff() > 0.0);
  }
}

TEST_CASE("invalid meshes are rejected") {
  CHECK_THROWS_AS(RadialMesh::log_mesh(0.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(RadialMesh::log_mesh(1.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(RadialMesh::log_mesh(2.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(RadialMesh::uniform(0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(RadialMesh::uniform(-1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(RadialMesh::uniform(1.0, 2), std::invalid_argument);
}

TEST_CASE("uniform derivative is exactly antisymmetric") {
  const RadialMesh mesh = RadialMesh::uniform(4.0, 4);
  const Eigen::MatrixXd D(mesh.derivative_matrix());
  CHECK((D + D.transpose()).cwiseAbs().maxCoeff() == 0.0);
  // D r at the middle point: (r3 - r1) / (2 dr) = 1
  CHECK(mesh.derivative(mesh.r())[1] == doctest::Approx(1.0));
}

TEST_CASE("log mesh W D is antisymmetric") {
  const RadialMesh mesh = testing::small_log_mesh(60);
  const Eigen::MatrixXd WD =
      mesh.weights().asDiagonal() * Eigen::MatrixXd(mesh.derivative_matrix());
  CHECK((WD + WD.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("derivative_transpose matches the dense transpose") {
  const RadialMesh mesh = testing::small_log_mesh(40);
  const Vector f = testing::random_vector(static_cast<Eigen::Index>(mesh.size()), 3);
  const Eigen::MatrixXd D(mesh.derivative_matrix());
  CHECK((mesh.derivative(f) - D * f).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((mesh.derivative_transpose(f) - D.transpose() * f).cwiseAbs().maxCoeff() <
        1e-9);
}

TEST_CASE("log-mesh derivative converges at second order") {
  auto error = [](int M) {
    const RadialMesh mesh =
        RadialMesh::log_mesh(-6.0, std::log(10.0 + std::exp(-6.0)), M);
    // r e^{-r} vanishes at the origin like the boundary condition assumes
    const Eigen::ArrayXd r = mesh.r().array();
    const Vector f = (r * (-r).exp()).matrix();
    const Vector exact = ((1.0 - r) * (-r).exp()).matrix();
    const Vector df = mesh.derivative(f);
    // ignore the last point where the outer Dirichlet boundary enters
    const Eigen::Index n = f.size() - 1;
    return (df.head(n) - exact.head(n)).cwiseAbs().maxCoeff();
  };
  const double order = std::log2(error(400) / error(800));
  CHECK(order >= 1.9);
}

TEST_CASE("quadrature of exp(-2r) on the paper log mesh") {
  const RadialMesh mesh = RadialMesh::log_mesh(-10.0, 4.9, 1700);
  const Vector f = (-2.0 * mesh.r().array()).exp().matrix();
  CHECK(std::abs(mesh.weights().dot(f) - 0.5) < 1e-4);
}

TEST_CASE("inner products") {
  const RadialMesh mesh = RadialMesh::uniform(1.0, 10);
  const Vector ones = Vector::Ones(9);
  CHECK(inner_product(ones, ones, mesh) == doctest::Approx(0.9));
  const Vector stacked = Vector::Ones(18);
  CHECK(inner_product(stacked, stacked, mesh) == doctest::Approx(1.8));
  CHECK(weighted(stacked, mesh).sum() == doctest::Approx(1.8));
  CHECK_THROWS_AS(inner_product(Vector::Ones(5), Vector::Ones(5), mesh),
                  std::invalid_argument);
}

TEST_CASE("same_grid") {
  CHECK(RadialMesh::uniform(1.0, 10).same_grid(RadialMesh::uniform(1.0, 10)));
  CHECK_FALSE(RadialMesh::uniform(1.0, 10).same_grid(RadialMesh::uniform(2.0, 10)));
  CHECK_FALSE(RadialMesh::uniform(1.0, 10).same_grid(
      RadialMesh::log_mesh(-1.0, 0.0, 10)));
}
