#include "diracnn/hydrogen.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace diracnn {

void validate_hydrogen(int n, int kappa, double charge,
                       double speed_of_light) {
  if (n < 1) {
    throw std::invalid_argument("principal quantum number must be >= 1");
  }
  if (kappa == 0 || kappa < -n || kappa > n - 1) {
    throw std::invalid_argument("kappa = " + std::to_string(kappa) +
                                " is not allowed for n = " + std::to_string(n));
  }
  if (!(charge > 0.0) || !(speed_of_light > 0.0)) {
    throw std::invalid_argument("charge and speed of light must be positive");
  }
  if (!(charge / speed_of_light < std::abs(kappa))) {
    throw std::invalid_argument("Z alpha >= |kappa|: no bound state");
  }
}

double hydrogen_energy(int n, int kappa, double charge,
                       double speed_of_light) {
  validate_hydrogen(n, kappa, charge, speed_of_light);
  const double za = charge / speed_of_light;
  const double j_half = std::abs(kappa); // j + 1/2
  const double denom = (n - j_half) + std::sqrt(j_half * j_half - za * za);
  const double x = za * za / (denom * denom);
  const double root = std::sqrt(1.0 + x);
  // c^2 (1/sqrt(1+x) - 1) without cancellation
  return -speed_of_light * speed_of_light * x / (root * (1.0 + root));
}

HydrogenState hydrogen_state(int n, int kappa, double charge,
                             double speed_of_light) {
  HydrogenState st;
  st.n = n;
  st.kappa = kappa;
  st.charge = charge;
  st.speed_of_light = speed_of_light;
  st.energy = hydrogen_energy(n, kappa, charge, speed_of_light);

  const double c = speed_of_light;
  const double c2 = c * c;
  const double za = charge / c;
  const double eps = st.energy;
  st.s = std::sqrt(static_cast<double>(kappa) * kappa - za * za);
  // c^4 - E^2 = (c^2 - E)(c^2 + E) with c^2 - E = -eps
  st.decay = std::sqrt(-eps * (2.0 * c2 + eps)) / c;
  st.mu = std::sqrt(-eps / (2.0 * c2 + eps));

  // C_q = 2 (q - n + j - 1/2) / (q (q + 2s)) C_{q-1}, terminating at
  // q = n - |kappa| where the numerator vanishes.
  const int terms = n - std::abs(kappa) + 1;
  const double j_minus_half = std::abs(kappa) - 1.0;
  double cq = 1.0;
  for (int q = 0; q < terms; ++q) {
    if (q > 0) {
      cq *= 2.0 * (q - n + j_minus_half) / (q * (q + 2.0 * st.s));
    }
    st.large.push_back(cq * ((st.s + q - kappa) / st.mu + za));
    st.small.push_back(cq * (st.s + q + kappa - za / st.mu));
  }
  return st;
}

namespace {

double series(const std::vector<double> &coeff, double rho) {
  double sum = 0.0;
  for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) {
    sum = sum * rho + *it;
  }
  return sum;
}

} // namespace

double HydrogenState::large_at(double r) const {
  const double rho = decay * r;
  return std::exp(-rho) * std::pow(rho, s) * series(large, rho);
}

double HydrogenState::small_at(double r) const {
  const double rho = decay * r;
  return std::exp(-rho) * std::pow(rho, s) * series(small, rho);
}

double HydrogenState::large_derivative_at(double r) const {
  const double rho = decay * r;
  double poly = 0.0;
  double dpoly = 0.0;
  for (std::size_t m = large.size(); m-- > 0;) {
    dpoly = dpoly * rho + poly;
    poly = poly * rho + large[m];
  }
  // d/drho [e^-rho rho^s P] = e^-rho rho^s (P (s/rho - 1) + P')
  const double d_rho =
      std::exp(-rho) * std::pow(rho, s) * (poly * (s / rho - 1.0) + dpoly);
  return decay * d_rho;
}

RadialSpinor hydrogen_wavefunction(int n, int kappa, double charge,
                                   double speed_of_light,
                                   const RadialMesh &mesh) {
  const HydrogenState st = hydrogen_state(n, kappa, charge, speed_of_light);
  const Vector &r = mesh.r();
  RadialSpinor out{Vector(r.size()), Vector(r.size())};
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    out.F[i] = st.large_at(r[i]);
    out.G[i] = st.small_at(r[i]);
  }
  return sign_fixed(normalized(out, mesh));
}

int count_nodes(const Vector &F, double relative_floor) {
  if (F.size() == 0) {
    throw std::invalid_argument("count_nodes: empty input");
  }
  const double peak = F.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) {
    throw std::invalid_argument("count_nodes: all-zero input");
  }
  if (!(relative_floor >= 0.0 && relative_floor < 1.0)) {
    throw std::invalid_argument("count_nodes: floor must lie in [0, 1)");
  }
  const double floor = relative_floor * peak;
  int nodes = 0;
  int last_sign = 0;
  for (Eigen::Index i = 0; i < F.size(); ++i) {
    if (std::abs(F[i]) <= floor) {
      continue;
    }
    const int sign = F[i] > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) {
      ++nodes;
    }
    last_sign = sign;
  }
  return nodes;
}

} // namespace diracnn
