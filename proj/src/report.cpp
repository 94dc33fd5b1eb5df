#include "diracnn/report.hpp"

#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace diracnn {

namespace {

void require_on_mesh(const RadialSpinor &s, const RadialMesh &mesh,
                     const char *what) {
  const auto n = static_cast<Eigen::Index>(mesh.size());
  if (s.F.size() != n || s.G.size() != n) {
    throw std::invalid_argument(std::string(what) +
                                " is not sampled on the output mesh");
  }
}

} // namespace

int phase_to_match(const RadialSpinor &state, const RadialSpinor &reference,
                   const RadialMesh &mesh) {
  return inner_product(state, reference, mesh) >= 0.0 ? 1 : -1;
}

Comparison export_comparison(const RadialSpinor &state,
                             const RadialSpinor &reference,
                             const RadialMesh &mesh) {
  require_on_mesh(state, mesh, "state");
  require_on_mesh(reference, mesh, "reference");
  const double sign = phase_to_match(state, reference, mesh);
  Comparison out;
  out.aligned = RadialSpinor{sign * state.F, sign * state.G};
  const double scale_F = reference.F.cwiseAbs().maxCoeff();
  const double scale_G = reference.G.cwiseAbs().maxCoeff();
  out.error_F = (out.aligned.F - reference.F).cwiseAbs();
  out.error_G = (out.aligned.G - reference.G).cwiseAbs();
  if (scale_F > 0.0) {
    out.error_F /= scale_F;
  }
  if (scale_G > 0.0) {
    out.error_G /= scale_G;
  }
  return out;
}

void write_wavefunction_csv(const RadialMesh &mesh, const RadialSpinor &state,
                            const std::optional<RadialSpinor> &reference,
                            std::ostream &out) {
  require_on_mesh(state, mesh, "state");
  out << std::setprecision(17);
  if (!reference) {
    out << "r,F,G\n";
    for (Eigen::Index i = 0; i < state.F.size(); ++i) {
      out << mesh.r()[i] << ',' << state.F[i] << ',' << state.G[i] << '\n';
    }
    return;
  }
  const Comparison cmp = export_comparison(state, *reference, mesh);
  out << "r,F,G,F_ref,G_ref,err_F,err_G\n";
  for (Eigen::Index i = 0; i < state.F.size(); ++i) {
    out << mesh.r()[i] << ',' << cmp.aligned.F[i] << ',' << cmp.aligned.G[i]
        << ',' << reference->F[i] << ',' << reference->G[i] << ','
        << cmp.error_F[i] << ',' << cmp.error_G[i] << '\n';
  }
}

} // namespace diracnn
