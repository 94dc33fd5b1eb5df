#include "diracnn/gradient.hpp"
#include "diracnn/network.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace diracnn;

TEST_CASE("activation functions") {
  CHECK(softplus(0.0) == doctest::Approx(0.69314718055994531).epsilon(1e-15));
  CHECK(softplus(800.0) == 800.0);
  CHECK(softplus(-800.0) >= 0.0);
  CHECK(logistic(0.0) == 0.5);
  for (double x : {-30.0, -2.0, 0.1, 5.0, 40.0}) {
    const double h = 1e-6;
    CHECK(logistic(x) == doctest::Approx((softplus(x + h) - softplus(x - h)) / (2 * h)).epsilon(1e-6));
    CHECK(logistic(x) >= 0.0);
    CHECK(logistic(x) <= 1.0);
  }
}

TEST_CASE("initialization") {
  const NetParams a = init_params(42, Architecture::fully_connected);
  const NetParams b = init_params(42, Architecture::fully_connected);
  const NetParams c = init_params(43, Architecture::fully_connected);
  CHECK(a.flatten() == b.flatten());
  CHECK(a.flatten() != c.flatten());
  REQUIRE(a.layers.size() == 3);
  CHECK(a.parameter_count() == 16 + 16 + 256 + 16 + 16 + 1);
  for (const DenseLayer &l : a.layers) {
    CHECK(l.bias.cwiseAbs().maxCoeff() == 0.0);
    const double limit = std::sqrt(6.0 / static_cast<double>(l.weight.rows() + l.weight.cols()));
    CHECK(l.weight.cwiseAbs().maxCoeff() <= limit);
  }
  const NetParams s = init_params(42, Architecture::split_two_head, 8);
  CHECK(s.heads() == 2);
  CHECK(s.layers.size() == 6);
  CHECK(s.parameter_count() == 2 * (8 + 8 + 64 + 8 + 8 + 1));
  CHECK_THROWS_AS(init_params(1, Architecture::fully_connected, 0), std::invalid_argument);
}

TEST_CASE("affine output with zero weights is constant") {
  NetParams p = init_params(1, Architecture::fully_connected).zeros_like();
  p.layers[2].bias[0] = 1.25;
  const Vector r = Vector::LinSpaced(20, 0.01, 5.0);
  const Eigen::MatrixXd out = forward(p, r);
  CHECK((out.array() - 1.25).abs().maxCoeff() == 0.0);
}

TEST_CASE("batched forward equals per-point forward") {
  const NetParams p = init_params(5, Architecture::split_two_head);
  const Vector r = Vector::LinSpaced(37, 1e-4, 30.0);
  const Eigen::MatrixXd batch = forward(p, r);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const Eigen::MatrixXd single = forward(p, r.segment(i, 1));
    CHECK((single.row(0) - batch.row(i)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("forward matches a scalar reference") {
  const NetParams p = init_params(9, Architecture::fully_connected, 4);
  const double r = 0.7;
  double h1[4], h2[4];
  for (int i = 0; i < 4; ++i) {
    h1[i] = softplus(p.layers[0].weight(i, 0) * r + p.layers[0].bias[i]);
  }
  for (int i = 0; i < 4; ++i) {
    double z = p.layers[1].bias[i];
    for (int j = 0; j < 4; ++j) {
      z += p.layers[1].weight(i, j) * h1[j];
    }
    h2[i] = softplus(z);
  }
  double out = p.layers[2].bias[0];
  for (int j = 0; j < 4; ++j) {
    out += p.layers[2].weight(0, j) * h2[j];
  }
  Vector rv(1);
  rv[0] = r;
  CHECK(forward(p, rv)(0, 0) == doctest::Approx(out).epsilon(1e-14));
}

TEST_CASE("backward matches finite differences of a linear functional") {
  for (Architecture arch : {Architecture::fully_connected, Architecture::split_two_head}) {
    const NetParams p = init_params(11, arch, 6);
    const Vector r = Vector::LinSpaced(25, 0.05, 4.0);
    ForwardTape tape;
    const Eigen::MatrixXd out = forward(p, r, &tape);
    Eigen::MatrixXd weights(out.rows(), out.cols());
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      weights.col(j) = testing::random_vector(out.rows(), 100 + static_cast<std::uint64_t>(j));
    }
    const std::vector<double> g = backward(p, r, tape, weights).flatten();
    std::vector<double> theta = p.flatten();
    for (std::size_t k = 0; k < theta.size(); k += 7) {
      const double h = 1e-6;
      NetParams q = p;
      std::vector<double> t = theta;
      t[k] += h;
      q.assign(t);
      const double up = (forward(q, r).array() * weights.array()).sum();
      t[k] -= 2 * h;
      q.assign(t);
      const double down = (forward(q, r).array() * weights.array()).sum();
      CHECK(g[k] == doctest::Approx((up - down) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("flatten and assign round trip") {
  NetParams p = init_params(3, Architecture::split_two_head);
  const std::vector<double> theta = p.flatten();
  NetParams q = p.zeros_like();
  q.assign(theta);
  CHECK(q.flatten() == theta);
  CHECK(q.all_finite());
  std::vector<double> shorter(theta.begin(), theta.end() - 1);
  CHECK_THROWS_AS(q.assign(shorter), std::invalid_argument);
  q.layers[1].weight(0, 0) = NAN;
  CHECK_FALSE(q.all_finite());
}

TEST_CASE("checkpoint round trip is exact") {
  for (Architecture arch : {Architecture::fully_connected, Architecture::split_two_head}) {
    const NetParams p = init_params(77, arch, 5);
    std::stringstream buf;
    save_params(p, buf);
    const NetParams q = load_params(buf);
    CHECK(q.architecture == arch);
    CHECK(q.hidden == 5);
    CHECK(q.flatten() == p.flatten());
  }
}

TEST_CASE("malformed checkpoints are rejected") {
  std::stringstream bad_magic("weights 1\n");
  CHECK_THROWS(load_params(bad_magic));
  std::stringstream bad_count("diracnn-params 1\nfully_connected 16 6\n");
  CHECK_THROWS(load_params(bad_count));
  std::stringstream truncated("diracnn-params 1\nfully_connected 2 3\n2 1\n0.5\n");
  CHECK_THROWS(load_params(truncated));
  std::stringstream bad_arch("diracnn-params 1\nconv 2 3\n");
  CHECK_THROWS(load_params(bad_arch));
}

TEST_CASE("architecture names") {
  CHECK(architecture_from_string("fully_connected") == Architecture::fully_connected);
  CHECK(architecture_from_string("split") == Architecture::split_two_head);
  CHECK(architecture_from_string(to_string(Architecture::split_two_head)) ==
        Architecture::split_two_head);
  CHECK_THROWS_AS(architecture_from_string("dense"), std::invalid_argument);
}

TEST_CASE("Adam") {
  NetParams p = init_params(1, Architecture::fully_connected, 2);
  const std::vector<double> before = p.flatten();
  AdamState state = AdamState::for_params(p);

  SUBCASE("zero gradient leaves parameters unchanged") {
    adam_step(p, p.zeros_like(), state);
    CHECK(p.flatten() == before);
    CHECK(state.step == 1);
  }

  SUBCASE("first step moves each parameter by about the learning rate") {
    NetParams g = p.zeros_like();
    std::vector<double> ones(p.parameter_count(), 0.0);
    for (std::size_t k = 0; k < ones.size(); ++k) {
      ones[k] = (k % 2 == 0) ? 3.0 : -0.02;
    }
    g.assign(ones);
    adam_step(p, g, state);
    const std::vector<double> after = p.flatten();
    for (std::size_t k = 0; k < after.size(); ++k) {
      const double expected = (k % 2 == 0) ? -0.001 : 0.001;
      CHECK(after[k] - before[k] == doctest::Approx(expected).epsilon(1e-5));
    }
  }

  SUBCASE("ten steps agree with a hand-rolled scalar reference") {
    const double grads[] = {0.5, -0.1, 0.3, 0.3, 0.0, -2.0, 1.0, 0.01, 0.7, -0.4};
    double theta = before[0], m = 0.0, v = 0.0;
    for (int t = 1; t <= 10; ++t) {
      const double gk = grads[t - 1];
      NetParams g = p.zeros_like();
      std::vector<double> gv(p.parameter_count(), 0.0);
      gv[0] = gk;
      g.assign(gv);
      adam_step(p, g, state);
      m = 0.9 * m + 0.1 * gk;
      v = 0.999 * v + 0.001 * gk * gk;
      const double mh = m / (1.0 - std::pow(0.9, t));
      const double vh = v / (1.0 - std::pow(0.999, t));
      theta -= 0.001 * mh / (std::sqrt(vh) + 1e-8);
    }
    CHECK(p.flatten()[0] == doctest::Approx(theta).epsilon(1e-14));
    CHECK(state.step == 10);
  }

  SUBCASE("shape mismatch") {
    const NetParams other = init_params(1, Architecture::split_two_head, 2);
    CHECK_THROWS_AS(adam_step(p, other, state), std::invalid_argument);
  }
}
