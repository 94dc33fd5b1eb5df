#include "diracnn/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace diracnn {

double WoodsSaxon::central_depth() const {
  return depth * (1.0 - asymmetry * static_cast<double>(neutrons - protons) /
                            static_cast<double>(neutrons + protons));
}

double WoodsSaxon::central_radius() const {
  return radius * std::cbrt(static_cast<double>(mass_number()));
}

double WoodsSaxon::spin_orbit_radius() const {
  return radius_ls * std::cbrt(static_cast<double>(mass_number()));
}

namespace {

struct Validator {
  void operator()(const Coulomb &c) const {
    if (!(c.charge > 0.0) || !std::isfinite(c.charge)) {
      throw std::invalid_argument("Coulomb charge must be positive");
    }
  }
  void operator()(const WoodsSaxon &ws) const {
    if (ws.neutrons < 0 || ws.protons < 0 || ws.mass_number() <= 0) {
      throw std::invalid_argument("Woods-Saxon needs N, Z >= 0 and A > 0");
    }
    if (!(ws.diffuseness > 0.0) || !(ws.diffuseness_ls > 0.0)) {
      throw std::invalid_argument("Woods-Saxon diffuseness must be positive");
    }
    for (double v : {ws.depth, ws.asymmetry, ws.radius, ws.radius_ls,
                     ws.lambda}) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("Woods-Saxon parameters must be finite");
      }
    }
  }
};

double fermi_shape(double r, double radius, double diffuseness) {
  return 1.0 / (1.0 + std::exp((r - radius) / diffuseness));
}

} // namespace

void validate(const PotentialSpec &spec) { std::visit(Validator{}, spec); }

Potentials eval_potentials(const PotentialSpec &spec, const RadialMesh &mesh) {
  validate(spec);
  const Vector &r = mesh.r();
  Potentials out{Vector(r.size()), Vector(r.size())};
  if (const auto *coulomb = std::get_if<Coulomb>(&spec)) {
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      out.sum[i] = -coulomb->charge / r[i];
    }
    out.difference = out.sum;
    return out;
  }
  const auto &ws = std::get<WoodsSaxon>(spec);
  const double v0 = ws.central_depth();
  const double r0 = ws.central_radius();
  const double r0_ls = ws.spin_orbit_radius();
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    out.sum[i] = v0 * fermi_shape(r[i], r0, ws.diffuseness);
    out.difference[i] =
        -ws.lambda * v0 * fermi_shape(r[i], r0_ls, ws.diffuseness_ls);
  }
  return out;
}

} // namespace diracnn
