#pragma once

#include "diracnn/dirac_operator.hpp"
#include "diracnn/losses.hpp"
#include "diracnn/network.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace diracnn {

/// How the network output becomes the large component.
enum class TrialForm {
  reduced,      ///< output is f = F / r
  large_direct, ///< output is F itself
};

std::string to_string(TrialForm t);
TrialForm trial_form_from_string(const std::string &name);

/// Maps network outputs to a stacked spinor (F, G) and pulls spinor
/// gradients back to the outputs.
///
/// fully connected: F = t * f, G = R(eps_lag) F
/// split two-head:  F = t * f_F, G = t * f_G
/// where t = r for the reduced form and t = 1 otherwise.
class TrialSpinorMap {
public:
  TrialSpinorMap(const RadialMesh &mesh, Architecture architecture,
                 TrialForm form, const SmallComponentMap *small);

  Vector to_spinor(const Eigen::MatrixXd &outputs) const;
  Eigen::MatrixXd pull_back(const Vector &grad_phi) const;

private:
  Architecture architecture_;
  Vector factor_;
  const SmallComponentMap *small_;
};

using SpinorObjective = std::function<Objective(const Vector &phi)>;

struct LossEvaluation {
  double loss = 0.0;
  Vector phi;
  NetParams gradient;
};

/// Loss and its exact gradient with respect to the network parameters.
/// Throws std::runtime_error on a non-finite loss or gradient. A workspace
/// tape may be passed to reuse activation buffers across calls.
LossEvaluation loss_gradient(const NetParams &params, const Vector &r,
                             const TrialSpinorMap &map,
                             const SpinorObjective &objective,
                             ForwardTape *workspace = nullptr);

struct AdamOptions {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamOptions options;
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::int64_t step = 0;

  static AdamState for_params(const NetParams &params,
                              AdamOptions options = {});
};

void adam_step(NetParams &params, const NetParams &grad, AdamState &state);

} // namespace diracnn
