#pragma once

#include "diracnn/mesh.hpp"

#include <variant>

namespace diracnn {

/// Point nucleus of charge Z in Hartree atomic units: V = -Z/r, S = 0.
struct Coulomb {
  double charge = 1.0;
};

/// Neutron Woods-Saxon mean field. Energies in MeV, lengths in fm.
struct WoodsSaxon {
  int neutrons = 8;
  int protons = 8;
  double depth = -71.28;
  double asymmetry = 0.462;
  double radius = 1.233;
  double diffuseness = 0.615;
  double radius_ls = 1.144;
  double diffuseness_ls = 0.648;
  double lambda = 11.12;

  int mass_number() const { return neutrons + protons; }
  /// V' (1 - kappa' (N - Z) / (N + Z))
  double central_depth() const;
  double central_radius() const;
  double spin_orbit_radius() const;
};

using PotentialSpec = std::variant<Coulomb, WoodsSaxon>;

/// Potential combinations as they enter the Dirac operator:
/// sum = V + S on the large-component diagonal,
/// difference = V - S on the small-component diagonal.
struct Potentials {
  Vector sum;
  Vector difference;
};

void validate(const PotentialSpec &spec);

Potentials eval_potentials(const PotentialSpec &spec, const RadialMesh &mesh);

/// Kinetic prefactor on the derivative blocks (c in a.u., hbar*c in MeV fm)
/// and the rest energy m c^2.
struct Units {
  double kinetic = 137.035999;
  double rest_energy = 137.035999 * 137.035999;

  static Units atomic(double speed_of_light = 137.035999) {
    return {speed_of_light, speed_of_light * speed_of_light};
  }
  static Units nuclear(double hbar_c = 197.32698, double rest_energy = 939.0) {
    return {hbar_c, rest_energy};
  }
};

} // namespace diracnn
