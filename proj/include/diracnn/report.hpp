#pragma once

#include "diracnn/dirac_operator.hpp"

#include <iosfwd>
#include <optional>

namespace diracnn {

/// +1 or -1, whichever brings `state` closest to `reference` in the
/// weighted L2 norm.
int phase_to_match(const RadialSpinor &state, const RadialSpinor &reference,
                   const RadialMesh &mesh);

/// Pointwise deviation of a spinor from a reference after phase alignment:
/// |psi - psi_ref| / max|psi_ref|, separately for F and G.
struct Comparison {
  RadialSpinor aligned;
  Vector error_F;
  Vector error_G;
};

/// Both spinors must be sampled on `mesh`; nothing is resampled.
Comparison export_comparison(const RadialSpinor &state,
                             const RadialSpinor &reference,
                             const RadialMesh &mesh);

/// CSV with columns r,F,G and, when a reference is given,
/// F_ref,G_ref,err_F,err_G. 17 significant digits.
void write_wavefunction_csv(const RadialMesh &mesh, const RadialSpinor &state,
                            const std::optional<RadialSpinor> &reference,
                            std::ostream &out);

} // namespace diracnn
