#include "diracnn/gradient.hpp"

#include <cmath>
#include <stdexcept>

namespace diracnn {

std::string to_string(TrialForm t) {
  return t == TrialForm::reduced ? "reduced" : "large_direct";
}

TrialForm trial_form_from_string(const std::string &name) {
  if (name == "reduced") {
    return TrialForm::reduced;
  }
  if (name == "large_direct") {
    return TrialForm::large_direct;
  }
  throw std::invalid_argument("unknown trial form '" + name + "'");
}

TrialSpinorMap::TrialSpinorMap(const RadialMesh &mesh,
                               Architecture architecture, TrialForm form,
                               const SmallComponentMap *small)
    : architecture_(architecture),
      factor_(form == TrialForm::reduced ? mesh.r()
                                         : Vector::Ones(mesh.size())),
      small_(small) {
  if (architecture == Architecture::fully_connected && small == nullptr) {
    throw std::invalid_argument(
        "fully connected trial map needs the small-component map");
  }
}

Vector TrialSpinorMap::to_spinor(const Eigen::MatrixXd &outputs) const {
  const Eigen::Index n = factor_.size();
  Vector phi(2 * n);
  phi.head(n) = factor_.cwiseProduct(outputs.col(0));
  if (architecture_ == Architecture::fully_connected) {
    phi.tail(n) = small_->apply(phi.head(n));
  } else {
    phi.tail(n) = factor_.cwiseProduct(outputs.col(1));
  }
  return phi;
}

Eigen::MatrixXd TrialSpinorMap::pull_back(const Vector &grad_phi) const {
  const Eigen::Index n = factor_.size();
  if (architecture_ == Architecture::fully_connected) {
    Eigen::MatrixXd out(n, 1);
    out.col(0) = factor_.cwiseProduct(grad_phi.head(n) +
                                      small_->apply_transpose(grad_phi.tail(n)));
    return out;
  }
  Eigen::MatrixXd out(n, 2);
  out.col(0) = factor_.cwiseProduct(grad_phi.head(n));
  out.col(1) = factor_.cwiseProduct(grad_phi.tail(n));
  return out;
}

LossEvaluation loss_gradient(const NetParams &params, const Vector &r,
                             const TrialSpinorMap &map,
                             const SpinorObjective &objective,
                             ForwardTape *workspace) {
  ForwardTape local;
  ForwardTape &tape = workspace != nullptr ? *workspace : local;
  const Eigen::MatrixXd outputs = forward(params, r, &tape);
  LossEvaluation out;
  out.phi = map.to_spinor(outputs);
  const Objective obj = objective(out.phi);
  if (!std::isfinite(obj.value)) {
    throw std::runtime_error("loss is not finite");
  }
  out.loss = obj.value;
  out.gradient = backward(params, r, tape, map.pull_back(obj.gradient));
  if (!out.gradient.all_finite()) {
    throw std::runtime_error("loss gradient is not finite");
  }
  return out;
}

AdamState AdamState::for_params(const NetParams &params, AdamOptions options) {
  AdamState state;
  state.options = options;
  state.first_moment.assign(params.parameter_count(), 0.0);
  state.second_moment.assign(params.parameter_count(), 0.0);
  return state;
}

void adam_step(NetParams &params, const NetParams &grad, AdamState &state) {
  std::vector<double> theta = params.flatten();
  const std::vector<double> g = grad.flatten();
  if (g.size() != theta.size() || state.first_moment.size() != theta.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  const AdamOptions &o = state.options;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(o.beta1, t);
  const double bias2 = 1.0 - std::pow(o.beta2, t);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    double &m = state.first_moment[i];
    double &v = state.second_moment[i];
    m = o.beta1 * m + (1.0 - o.beta1) * g[i];
    v = o.beta2 * v + (1.0 - o.beta2) * g[i] * g[i];
    theta[i] -= o.learning_rate * (m / bias1) / (std::sqrt(v / bias2) + o.epsilon);
  }
  params.assign(theta);
}

} // namespace diracnn
