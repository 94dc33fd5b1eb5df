#include "diracnn/hydrogen.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace diracnn;

TEST_CASE("Dirac-Coulomb energies") {
  const double expected[] = {-0.50000665659656079, -0.12500208018919462,
                             -0.055556295176423125, -0.031250338029125768,
                             -0.020000181058518983, -0.013888996749742433};
  for (int n = 1; n <= 6; ++n) {
    CHECK(testing::relative(hydrogen_energy(n, -1), expected[n - 1]) < 1e-12);
  }
  // 2p1/2 is degenerate with 2s1/2; 2p3/2 is not
  CHECK(testing::relative(hydrogen_energy(2, 1), -0.12500208018919462) < 1e-12);
  CHECK(testing::relative(hydrogen_energy(2, -2), -0.12500041602897697) < 1e-12);
  CHECK(testing::relative(hydrogen_energy(3, -3), -0.055555637733815009) < 1e-12);
}

TEST_CASE("state auxiliaries") {
  const HydrogenState s = hydrogen_state(1, -1);
  const double c = testing::kSpeedOfLight;
  CHECK(s.s == doctest::Approx(std::sqrt(1.0 - 1.0 / (c * c))).epsilon(1e-15));
  CHECK(s.mu == doctest::Approx(0.0036487248624105027).epsilon(1e-12));
  CHECK(s.large.size() == 1);
  CHECK(hydrogen_state(4, -1).large.size() == 4);
  CHECK(hydrogen_state(4, 3).large.size() == 2);
  CHECK(hydrogen_state(4, -4).large.size() == 1);
}

TEST_CASE("ground state G/F is the known constant") {
  const HydrogenState s = hydrogen_state(1, -1);
  for (double r : {0.01, 0.5, 2.0, 7.0}) {
    CHECK(s.small_at(r) / s.large_at(r) ==
          doctest::Approx(-0.0036487248624105027).epsilon(1e-12));
  }
}

TEST_CASE("series derivative matches finite differences") {
  for (int n : {1, 3, 5}) {
    const HydrogenState s = hydrogen_state(n, -1);
    for (double r : {0.3, 1.7, 6.0}) {
      const double h = 1e-5;
      const double fd = (s.large_at(r + h) - s.large_at(r - h)) / (2.0 * h);
      CHECK(s.large_derivative_at(r) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("analytic states satisfy the radial Dirac equations") {
  const double c = testing::kSpeedOfLight;
  for (int kappa : {-1, 1, -2}) {
    const int n = 3;
    const HydrogenState s = hydrogen_state(n, kappa);
    for (double r : {0.2, 1.0, 4.0}) {
      const double h = 1e-5;
      const double dG = (s.small_at(r + h) - s.small_at(r - h)) / (2.0 * h);
      // upper row: (-1/r - eps) F + c(-G' + kappa G / r) = 0
      const double upper = (-1.0 / r - s.energy) * s.large_at(r) +
                           c * (-dG + kappa * s.small_at(r) / r);
      // lower row: c(F' + kappa F / r) + (-1/r - 2c^2 - eps) G = 0
      const double lower =
          c * (s.large_derivative_at(r) + kappa * s.large_at(r) / r) +
          (-1.0 / r - 2.0 * c * c - s.energy) * s.small_at(r);
      const double scale = c * std::abs(s.large_at(r)) / r + 1.0;
      CHECK(std::abs(upper) / scale < 1e-6);
      CHECK(std::abs(lower) / scale < 1e-6);
    }
  }
}

TEST_CASE("node count is n - 1 - l and wave functions are normalized") {
  const RadialMesh mesh = RadialMesh::log_mesh(-10.0, 4.9, 1700);
  for (int n = 1; n <= 6; ++n) {
    for (int kappa = -n; kappa <= n - 1; ++kappa) {
      if (kappa == 0) {
        continue;
      }
      const RadialSpinor psi =
          hydrogen_wavefunction(n, kappa, 1.0, testing::kSpeedOfLight, mesh);
      CAPTURE(n);
      CAPTURE(kappa);
      CHECK(count_nodes(psi.F) == n - 1 - orbital_l(kappa));
      CHECK(std::abs(inner_product(psi, psi, mesh) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("invalid quantum numbers") {
  CHECK_THROWS_AS(hydrogen_energy(0, -1), std::invalid_argument);
  CHECK_THROWS_AS(hydrogen_energy(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(hydrogen_energy(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(hydrogen_energy(2, -3), std::invalid_argument);
  CHECK_THROWS_AS(hydrogen_energy(1, -1, 200.0), std::invalid_argument);
  CHECK_THROWS_AS(hydrogen_energy(1, -1, -1.0), std::invalid_argument);
}

TEST_CASE("count_nodes") {
  Vector f(6);
  f << 1.0, 0.5, -0.5, -1.0, 1.0, 1e-9;
  CHECK(count_nodes(f) == 2);
  f[5] = -1e-9; // below the floor: tail noise
  CHECK(count_nodes(f) == 2);
  CHECK(count_nodes(f, 0.0) == 3);
  CHECK_THROWS_AS(count_nodes(Vector::Zero(4)), std::invalid_argument);
  CHECK_THROWS_AS(count_nodes(Vector()), std::invalid_argument);
  CHECK_THROWS_AS(count_nodes(f, 1.0), std::invalid_argument);
  CHECK(orbital_l(-1) == 0);
  CHECK(orbital_l(1) == 1);
  CHECK(orbital_l(-3) == 2);
}
