#pragma once

#include "diracnn/mesh.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace diracnn {

enum class Architecture {
  fully_connected, ///< 1 -> h -> h -> 1
  split_two_head,  ///< two disjoint 1 -> h -> h -> 1 stacks, one per component
};

std::string to_string(Architecture a);
Architecture architecture_from_string(const std::string &name);

/// weight is (out x in).
struct DenseLayer {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

/// Parameters of the trial-function network. Every head is three dense
/// layers with softplus after the first two and an affine output.
struct NetParams {
  Architecture architecture = Architecture::fully_connected;
  int hidden = 16;
  std::vector<DenseLayer> layers;

  int heads() const { return static_cast<int>(layers.size() / 3); }
  std::size_t parameter_count() const;
  std::vector<double> flatten() const;
  void assign(std::span<const double> values);
  NetParams zeros_like() const;
  bool all_finite() const;
};

NetParams init_params(std::uint64_t seed, Architecture architecture,
                      int hidden = 16);

double softplus(double x);
double logistic(double x);

/// Activations kept from a forward pass for the backward pass.
struct ForwardTape {
  struct HeadTape {
    Eigen::ArrayXXd a1, s1, a2, s2; // softplus values and slopes, (h x N)
    Eigen::ArrayXXd z, scratch;
  };
  std::vector<HeadTape> heads;
};

/// Evaluates every head at all points in one batch; result is
/// (points x heads).
Eigen::MatrixXd forward(const NetParams &params, const Vector &r,
                        ForwardTape *tape = nullptr);

/// Pulls d(loss)/d(output), shaped like the forward result, back to the
/// parameters.
NetParams backward(const NetParams &params, const Vector &r,
                   const ForwardTape &tape, const Eigen::MatrixXd &grad_out);

/// Checkpoint text format:
///   diracnn-params 1
///   <architecture> <hidden> <layer count>
///   then per layer: "<rows> <cols>", row-major weights, "<rows>", bias
void save_params(const NetParams &params, std::ostream &out);
NetParams load_params(std::istream &in);

} // namespace diracnn
