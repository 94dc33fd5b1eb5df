#include "diracnn/solver.hpp"

#include "diracnn/hydrogen.hpp"
#include "diracnn/losses.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace diracnn {

std::string to_string(Method m) {
  switch (m) {
  case Method::inverse:
    return "inverse";
  case Method::orthonormal:
    return "orthonormal";
  case Method::direct:
    return "direct";
  }
  return "unknown";
}

Method method_from_string(const std::string &name) {
  if (name == "inverse") {
    return Method::inverse;
  }
  if (name == "orthonormal") {
    return Method::orthonormal;
  }
  if (name == "direct") {
    return Method::direct;
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string to_string(StopReason s) {
  switch (s) {
  case StopReason::converged:
    return "converged";
  case StopReason::max_epochs:
    return "max_epochs";
  case StopReason::collapsed:
    return "collapsed";
  }
  return "unknown";
}

void write_trace_csv(const ConvergenceTrace &trace, std::ostream &out) {
  out << "epoch,epsilon,loss,seconds\n" << std::setprecision(17);
  for (const TraceEntry &e : trace) {
    out << e.epoch << ',' << e.energy << ',' << e.loss << ',' << e.seconds
        << '\n';
  }
}

void validate(const SolveConfig &config, const DiracOperator &op) {
  if (!std::isfinite(config.shift)) {
    throw std::invalid_argument("shift must be finite");
  }
  if (config.max_epochs < 1 || config.window < 1 || !(config.tolerance >= 0.0)) {
    throw std::invalid_argument(
        "max_epochs and window must be >= 1, tolerance >= 0");
  }
  const RadialMesh &mesh = op.mesh();
  if (config.method != Method::orthonormal) {
    return;
  }
  if (config.lower_states.empty()) {
    throw std::invalid_argument(
        "orthonormal method needs at least one lower state; the lowest state "
        "of a kappa block comes from the inverse method");
  }
  const auto &lower = config.lower_states;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i].F.size() != static_cast<Eigen::Index>(mesh.size()) ||
        lower[i].G.size() != lower[i].F.size()) {
      throw std::invalid_argument("lower state is not sampled on the mesh");
    }
    for (std::size_t j = 0; j <= i; ++j) {
      const double overlap = inner_product(lower[i], lower[j], mesh);
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(overlap - expected) > 1e-8) {
        std::ostringstream msg;
        msg << "lower states are not orthonormal: <" << i << '|' << j
            << "> = " << overlap;
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

namespace {

class EnergyWindow {
public:
  explicit EnergyWindow(int size) : size_(static_cast<std::size_t>(size)) {}

  void push(double value) {
    if (values_.size() < size_) {
      values_.push_back(value);
    } else {
      values_[next_] = value;
    }
    next_ = (next_ + 1) % size_;
  }

  bool full() const { return values_.size() == size_; }

  double spread() const {
    const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
    return *hi - *lo;
  }

private:
  std::size_t size_;
  std::size_t next_ = 0;
  std::vector<double> values_;
};

SolveResult train(const SolveConfig &config, const DiracOperator &op,
                  const ShiftedInverse *inverse,
                  const EpochCallback &callback) {
  validate(config, op);
  const RadialMesh &mesh = op.mesh();
  const Vector &r = mesh.r();
  const double sea_edge = config.shift - 2.0 * op.units().rest_energy;

  SmallComponentMap small(mesh, op.potentials(), op.kappa(), op.units());
  small.set_energy(config.shift);
  const TrialSpinorMap map(mesh, config.architecture, config.trial,
                           config.architecture == Architecture::fully_connected
                               ? &small
                               : nullptr);

  std::vector<Vector> lower;
  for (const RadialSpinor &s : config.lower_states) {
    lower.push_back(s.stacked());
  }

  SpinorObjective objective;
  switch (config.method) {
  case Method::inverse:
    objective = [&](const Vector &phi) {
      return inverse_rayleigh(phi, *inverse, mesh);
    };
    break;
  case Method::orthonormal:
    objective = [&](const Vector &phi) {
      Objective obj =
          inverse_rayleigh(orthonormal_project(phi, lower, mesh), *inverse, mesh);
      obj.gradient = orthonormal_project_transpose(obj.gradient, lower, mesh);
      return obj;
    };
    break;
  case Method::direct:
    objective = [&](const Vector &phi) {
      return direct_rayleigh(phi, op, mesh);
    };
    break;
  }

  SolveResult result;
  result.params = init_params(config.seed, config.architecture, config.hidden);
  AdamState adam = AdamState::for_params(result.params, config.adam);
  EnergyWindow window(config.window);
  Vector phi;
  ForwardTape tape;
  double total_seconds = 0.0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    LossEvaluation eval = loss_gradient(result.params, r, map, objective, &tape);
    const double energy = config.method == Method::direct
                              ? eval.loss
                              : energy_from_inverse(config.shift, eval.loss);
    if (!std::isfinite(energy)) {
      throw TrainingError("energy estimate is not finite at epoch " +
                          std::to_string(epoch));
    }
    phi = config.method == Method::orthonormal
              ? orthonormal_project(eval.phi, lower, mesh)
              : std::move(eval.phi);

    bool collapsed = energy < sea_edge;
    if (collapsed && config.method != Method::direct) {
      std::ostringstream msg;
      msg << "energy estimate " << energy << " fell below shift - 2mc^2 = "
          << sea_edge << " at epoch " << epoch << ": Dirac sea entry";
      throw DiracSeaEntry(msg.str());
    }

    bool converged = false;
    window.push(energy);
    if (window.full() && window.spread() < config.tolerance) {
      converged = true;
    }
    if (!converged && !collapsed && epoch < config.max_epochs) {
      adam_step(result.params, eval.gradient, adam);
      if (config.architecture == Architecture::fully_connected) {
        try {
          small.set_energy(energy);
        } catch (const DiracSeaEntry &) {
          if (config.method != Method::direct) {
            throw;
          }
          collapsed = true;
        }
      }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    total_seconds += seconds;
    result.trace.push_back(
        {epoch, energy, eval.loss, config.timing ? seconds : 0.0});
    result.energy = energy;
    result.epochs = epoch;

    const bool keep_going = !callback || callback(result.trace.back());
    if (collapsed) {
      result.stop = StopReason::collapsed;
      break;
    }
    if (converged) {
      result.stop = StopReason::converged;
      break;
    }
    if (!keep_going) {
      break;
    }
  }
  result.seconds_per_epoch = total_seconds / std::max(1, result.epochs);
  result.spinor = sign_fixed(normalized(RadialSpinor::unstack(phi), mesh));
  result.nodes = count_nodes(result.spinor.F);
  return result;
}

} // namespace

SolveResult train_state(const SolveConfig &config, const DiracOperator &op,
                        const EpochCallback &callback) {
  if (config.method == Method::direct) {
    return train(config, op, nullptr, callback);
  }
  const ShiftedInverse inverse(op, config.shift);
  return train(config, op, &inverse, callback);
}

SolveResult train_state(const SolveConfig &config, const DiracOperator &op,
                        const ShiftedInverse &inverse,
                        const EpochCallback &callback) {
  if (config.method != Method::direct && inverse.shift() != config.shift) {
    throw std::invalid_argument("factorization shift differs from config");
  }
  return train(config, op, &inverse, callback);
}

double inverse_loss(const RadialSpinor &phi, const ShiftedInverse &inverse,
                    const RadialMesh &mesh) {
  return inverse_rayleigh(phi.stacked(), inverse, mesh).value;
}

double direct_loss(const RadialSpinor &phi, const DiracOperator &op) {
  return direct_rayleigh(phi.stacked(), op, op.mesh()).value;
}

} // namespace diracnn
