#pragma once

#include "diracnn/dirac_operator.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace diracnn {

struct EigenPair {
  double energy = 0.0;
  RadialSpinor state; ///< normalized, sign fixed
  double residual = 0.0;
  int iterations = 0;
  /// Sum of squared neighbour differences over sum of squared neighbour
  /// sums, for F and G together. Smooth states sit far below 1; the
  /// staggered partners that central differences admit sit far above.
  double roughness = 0.0;
  bool physical = true;
};

struct OracleOptions {
  /// Bound on ||H v - eps v|| / ||v|| in the weighted norm, relative to
  /// max(1, |eps|).
  double tolerance = 1e-10;
  int max_iterations = 20000;
  std::uint64_t seed = 20240101;
  /// Extra block vectors beyond the number of wanted states.
  int block_extra = 4;
  /// Ritz values closer than this (relative) are treated as one cluster
  /// and rotated so that the smoothest combination is separated out.
  double cluster_gap = 1e-2;
  /// States rougher than this are staggered, not physical.
  double roughness_limit = 0.1;
  /// Drop staggered (non-physical) states from the results.
  bool physical_only = true;
};

class OracleNonConvergence : public std::runtime_error {
public:
  OracleNonConvergence(const std::string &what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

double roughness(const RadialSpinor &state);

/// Block shift-invert iteration on (shift - H)^{-1} with weighted
/// orthonormalization and Rayleigh-Ritz extraction. Returns the k
/// eigenpairs nearest the shift, ordered by |eps - shift|. Throws
/// OracleNonConvergence when the iteration stalls or when fewer than k
/// smooth states lie near the shift (physical_only).
std::vector<EigenPair> shift_invert_eigs(const DiracOperator &op,
                                         const ShiftedInverse &inverse, int k,
                                         const OracleOptions &options = {});

std::vector<EigenPair> shift_invert_eigs(const DiracOperator &op, double shift,
                                         int k,
                                         const OracleOptions &options = {});

/// Eigenpairs above the shift and below the cutoff, in increasing energy.
/// The shift must lie below every wanted level and above the Dirac sea.
std::vector<EigenPair> levels_below(const DiracOperator &op, double shift,
                                    double cutoff,
                                    const OracleOptions &options = {},
                                    int max_levels = 64);

} // namespace diracnn
