#include "diracnn/network.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace diracnn {

std::string to_string(Architecture a) {
  switch (a) {
  case Architecture::fully_connected:
    return "fully_connected";
  case Architecture::split_two_head:
    return "split_two_head";
  }
  return "unknown";
}

Architecture architecture_from_string(const std::string &name) {
  if (name == "fully_connected") {
    return Architecture::fully_connected;
  }
  if (name == "split_two_head" || name == "split") {
    return Architecture::split_two_head;
  }
  throw std::invalid_argument("unknown architecture '" + name + "'");
}

std::size_t NetParams::parameter_count() const {
  std::size_t count = 0;
  for (const auto &layer : layers) {
    count += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
  }
  return count;
}

std::vector<double> NetParams::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto &layer : layers) {
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) {
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) {
        out.push_back(layer.weight(i, j));
      }
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
      out.push_back(layer.bias[i]);
    }
  }
  return out;
}

void NetParams::assign(std::span<const double> values) {
  if (values.size() != parameter_count()) {
    throw std::invalid_argument("parameter vector has wrong length");
  }
  std::size_t k = 0;
  for (auto &layer : layers) {
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) {
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) {
        layer.weight(i, j) = values[k++];
      }
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
      layer.bias[i] = values[k++];
    }
  }
}

NetParams NetParams::zeros_like() const {
  NetParams out = *this;
  for (auto &layer : out.layers) {
    layer.weight.setZero();
    layer.bias.setZero();
  }
  return out;
}

bool NetParams::all_finite() const {
  for (const auto &layer : layers) {
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) {
      return false;
    }
  }
  return true;
}

NetParams init_params(std::uint64_t seed, Architecture architecture,
                      int hidden) {
  if (hidden < 1) {
    throw std::invalid_argument("hidden width must be positive");
  }
  NetParams params;
  params.architecture = architecture;
  params.hidden = hidden;
  const int heads = architecture == Architecture::split_two_head ? 2 : 1;
  std::mt19937_64 engine(seed);
  auto glorot = [&](int out, int in) {
    const double limit = std::sqrt(6.0 / (in + out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Eigen::MatrixXd w(out, in);
    for (int i = 0; i < out; ++i) {
      for (int j = 0; j < in; ++j) {
        w(i, j) = dist(engine);
      }
    }
    return w;
  };
  for (int h = 0; h < heads; ++h) {
    params.layers.push_back({glorot(hidden, 1), Eigen::VectorXd::Zero(hidden)});
    params.layers.push_back(
        {glorot(hidden, hidden), Eigen::VectorXd::Zero(hidden)});
    params.layers.push_back({glorot(1, hidden), Eigen::VectorXd::Zero(1)});
  }
  return params;
}

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double logistic(double x) {
  const double e = std::exp(-std::abs(x));
  return x >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
}

namespace {

// softplus and its slope from one exponential and one reciprocal, branch
// free so it vectorizes. log(u) with u = 1 + e is corrected by
// (e - (u - 1))/u, which recovers log1p(e) to rounding for tiny e.
void activate(const Eigen::ArrayXXd &z, Eigen::ArrayXXd &value,
              Eigen::ArrayXXd &slope, Eigen::ArrayXXd &scratch) {
  scratch = (-z.abs()).exp();
  value = 1.0 + scratch;
  slope = value.inverse();
  value = z.max(0.0) + value.log() + (scratch - (value - 1.0)) * slope;
  slope = (z >= 0.0).select(slope, scratch * slope);
}

} // namespace

Eigen::MatrixXd forward(const NetParams &params, const Vector &r,
                        ForwardTape *tape) {
  const int heads = params.heads();
  const Eigen::Index n = r.size();
  Eigen::MatrixXd out(n, heads);
  if (tape != nullptr) {
    tape->heads.resize(static_cast<std::size_t>(heads));
  }
  ForwardTape::HeadTape local;
  for (int h = 0; h < heads; ++h) {
    const DenseLayer &l1 = params.layers[3 * h];
    const DenseLayer &l2 = params.layers[3 * h + 1];
    const DenseLayer &l3 = params.layers[3 * h + 2];
    ForwardTape::HeadTape &t =
        tape != nullptr ? tape->heads[static_cast<std::size_t>(h)] : local;

    t.z.matrix().noalias() = l1.weight * r.transpose();
    t.z.colwise() += l1.bias.array();
    activate(t.z, t.a1, t.s1, t.scratch);
    t.z.matrix().noalias() = l2.weight * t.a1.matrix();
    t.z.colwise() += l2.bias.array();
    activate(t.z, t.a2, t.s2, t.scratch);
    out.col(h).transpose().noalias() = l3.weight * t.a2.matrix();
    out.col(h).array() += l3.bias[0];
  }
  return out;
}

NetParams backward(const NetParams &params, const Vector &r,
                   const ForwardTape &tape, const Eigen::MatrixXd &grad_out) {
  const int heads = params.heads();
  if (grad_out.cols() != heads || grad_out.rows() != r.size() ||
      static_cast<int>(tape.heads.size()) != heads) {
    throw std::invalid_argument("backward: shapes do not match forward pass");
  }
  NetParams grad = params.zeros_like();
  for (int h = 0; h < heads; ++h) {
    const ForwardTape::HeadTape &t = tape.heads[static_cast<std::size_t>(h)];
    const DenseLayer &l2 = params.layers[3 * h + 1];
    const DenseLayer &l3 = params.layers[3 * h + 2];
    DenseLayer &g1 = grad.layers[3 * h];
    DenseLayer &g2 = grad.layers[3 * h + 1];
    DenseLayer &g3 = grad.layers[3 * h + 2];

    const Eigen::RowVectorXd d_out = grad_out.col(h).transpose();
    g3.weight = d_out * t.a2.matrix().transpose();
    g3.bias[0] = d_out.sum();

    const Eigen::ArrayXXd d_z2 =
        (l3.weight.transpose() * d_out).array() * t.s2;
    g2.weight = d_z2.matrix() * t.a1.matrix().transpose();
    g2.bias = d_z2.rowwise().sum();

    const Eigen::ArrayXXd d_z1 =
        (l2.weight.transpose() * d_z2.matrix()).array() * t.s1;
    g1.weight = d_z1.matrix() * r;
    g1.bias = d_z1.rowwise().sum();
  }
  return grad;
}

void save_params(const NetParams &params, std::ostream &out) {
  out << "diracnn-params 1\n";
  out << to_string(params.architecture) << ' ' << params.hidden << ' '
      << params.layers.size() << '\n';
  out << std::setprecision(17);
  for (const auto &layer : params.layers) {
    out << layer.weight.rows() << ' ' << layer.weight.cols() << '\n';
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) {
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) {
        out << layer.weight(i, j) << (j + 1 < layer.weight.cols() ? ' ' : '\n');
      }
    }
    out << layer.bias.size() << '\n';
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
      out << layer.bias[i] << (i + 1 < layer.bias.size() ? ' ' : '\n');
    }
  }
}

NetParams load_params(std::istream &in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "diracnn-params" || version != 1) {
    throw std::runtime_error("not a diracnn parameter file");
  }
  std::string arch;
  NetParams params;
  std::size_t count = 0;
  if (!(in >> arch >> params.hidden >> count)) {
    throw std::runtime_error("truncated parameter header");
  }
  params.architecture = architecture_from_string(arch);
  const std::size_t expected =
      params.architecture == Architecture::split_two_head ? 6 : 3;
  if (count != expected) {
    throw std::runtime_error("layer count does not match architecture");
  }
  for (std::size_t k = 0; k < count; ++k) {
    Eigen::Index rows = 0, cols = 0, bias = 0;
    DenseLayer layer;
    if (!(in >> rows >> cols) || rows < 1 || cols < 1) {
      throw std::runtime_error("bad layer shape");
    }
    layer.weight.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (!(in >> layer.weight(i, j))) {
          throw std::runtime_error("truncated weights");
        }
      }
    }
    if (!(in >> bias) || bias != rows) {
      throw std::runtime_error("bias length does not match layer");
    }
    layer.bias.resize(bias);
    for (Eigen::Index i = 0; i < bias; ++i) {
      if (!(in >> layer.bias[i])) {
        throw std::runtime_error("truncated bias");
      }
    }
    params.layers.push_back(std::move(layer));
  }
  return params;
}

} // namespace diracnn
