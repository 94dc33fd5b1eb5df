#pragma once

#include "diracnn/dirac_operator.hpp"
#include "diracnn/gradient.hpp"
#include "diracnn/network.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace diracnn {

enum class Method {
  inverse,     ///< minimize <phi|(shift - H)^{-1}|phi> / <phi|phi>
  orthonormal, ///< same, after projecting out the supplied lower states
  direct,      ///< minimize <phi|H|phi> / <phi|phi>; collapses by design
};

std::string to_string(Method m);
Method method_from_string(const std::string &name);

struct SolveConfig {
  Method method = Method::inverse;
  double shift = -0.51;
  int max_epochs = 200000;
  int window = 500;
  /// Stop when max - min of the energy estimate over the window is below
  /// this, in the energy unit of the operator.
  double tolerance = 1e-9;
  std::uint64_t seed = 1;
  Architecture architecture = Architecture::fully_connected;
  int hidden = 16;
  TrialForm trial = TrialForm::reduced;
  AdamOptions adam;
  /// Normalized, mutually orthogonal states of the same kappa block
  /// (orthonormal method only).
  std::vector<RadialSpinor> lower_states;
  /// Record wall-clock seconds per epoch in the trace.
  bool timing = true;
};

struct TraceEntry {
  int epoch = 0;
  double energy = 0.0;
  double loss = 0.0;
  double seconds = 0.0;
};

using ConvergenceTrace = std::vector<TraceEntry>;

/// CSV with header "epoch,epsilon,loss,seconds", 17 significant digits.
void write_trace_csv(const ConvergenceTrace &trace, std::ostream &out);

enum class StopReason { converged, max_epochs, collapsed };
std::string to_string(StopReason s);

struct SolveResult {
  double energy = 0.0;
  RadialSpinor spinor; ///< normalized, sign fixed
  int nodes = 0;
  ConvergenceTrace trace;
  StopReason stop = StopReason::max_epochs;
  int epochs = 0;
  double seconds_per_epoch = 0.0;
  NetParams params;
};

class TrainingError : public std::runtime_error {
public:
  explicit TrainingError(const std::string &what) : std::runtime_error(what) {}
};

/// Observer called after each epoch; return false to stop early.
using EpochCallback = std::function<bool(const TraceEntry &)>;

/// Checks the invariants of a configuration against an operator; throws
/// std::invalid_argument.
void validate(const SolveConfig &config, const DiracOperator &op);

/// Trains one state. For inverse and orthonormal methods the energy inside
/// the small-component reconstruction is the previous epoch's estimate
/// (the shift at epoch 1). Aborts with DiracSeaEntry when the estimate drops
/// below shift - 2mc^2. The direct method instead stops with
/// StopReason::collapsed once the estimate falls past that point.
SolveResult train_state(const SolveConfig &config, const DiracOperator &op,
                        const EpochCallback &callback = {});

/// Same, reusing an existing factorization of (shift - H).
SolveResult train_state(const SolveConfig &config, const DiracOperator &op,
                        const ShiftedInverse &inverse,
                        const EpochCallback &callback = {});

/// Loss value of a fixed spinor, without training: inverse quotient for
/// inverse/orthonormal (after projection), H quotient for direct.
double inverse_loss(const RadialSpinor &phi, const ShiftedInverse &inverse,
                    const RadialMesh &mesh);
double direct_loss(const RadialSpinor &phi, const DiracOperator &op);

} // namespace diracnn
