#include "diracnn/dirac_operator.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

namespace diracnn {

Vector RadialSpinor::stacked() const {
  Vector phi(2 * F.size());
  phi << F, G;
  return phi;
}

RadialSpinor RadialSpinor::unstack(const Vector &phi) {
  if (phi.size() % 2 != 0) {
    throw std::invalid_argument("stacked spinor must have even length");
  }
  const Eigen::Index n = phi.size() / 2;
  return {phi.head(n), phi.tail(n)};
}

double inner_product(const RadialSpinor &a, const RadialSpinor &b,
                     const RadialMesh &mesh) {
  return inner_product(a.F, b.F, mesh) + inner_product(a.G, b.G, mesh);
}

double norm(const RadialSpinor &a, const RadialMesh &mesh) {
  return std::sqrt(inner_product(a, a, mesh));
}

RadialSpinor normalized(const RadialSpinor &a, const RadialMesh &mesh) {
  const double n = norm(a, mesh);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite spinor");
  }
  return {a.F / n, a.G / n};
}

RadialSpinor sign_fixed(const RadialSpinor &a) {
  const Eigen::Index n = a.F.size();
  const double peak = a.F.cwiseAbs().maxCoeff();
  double sign = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double here = std::abs(a.F[i]);
    if (here < 1e-2 * peak) {
      continue;
    }
    const double prev = i > 0 ? std::abs(a.F[i - 1]) : 0.0;
    const double next = i + 1 < n ? std::abs(a.F[i + 1]) : 0.0;
    if (here >= prev && here >= next) {
      sign = a.F[i] < 0.0 ? -1.0 : 1.0;
      break;
    }
  }
  return {sign * a.F, sign * a.G};
}

DiracOperator::DiracOperator(const RadialMesh &mesh,
                             const Potentials &potentials, int kappa,
                             Units units)
    : mesh_(mesh), potentials_(potentials), kappa_(kappa), units_(units) {
  if (kappa == 0) {
    throw std::invalid_argument("kappa = 0 is not a Dirac quantum number");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(mesh.size());
  if (potentials.sum.size() != n || potentials.difference.size() != n) {
    throw std::invalid_argument("potentials are not sampled on this mesh");
  }
  const double kin = units.kinetic;
  const double two_mc2 = 2.0 * units.rest_energy;
  const Vector &r = mesh.r();
  const Vector &up = mesh.upper();
  const Vector &lo = mesh.lower();

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(8 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double centrifugal = kappa / r[i];
    // F row: (V+S) F_i + kin (-(D G)_i + kappa/r_i G_i)
    entries.emplace_back(i, i, potentials.sum[i]);
    entries.emplace_back(i, n + i, kin * centrifugal);
    if (i > 0) {
      entries.emplace_back(i, n + i - 1, -kin * lo[i]);
    }
    if (i + 1 < n) {
      entries.emplace_back(i, n + i + 1, -kin * up[i]);
    }
    // G row: kin ((D F)_i + kappa/r_i F_i) + (V-S-2mc^2) G_i
    entries.emplace_back(n + i, i, kin * centrifugal);
    if (i > 0) {
      entries.emplace_back(n + i, i - 1, kin * lo[i]);
    }
    if (i + 1 < n) {
      entries.emplace_back(n + i, i + 1, kin * up[i]);
    }
    entries.emplace_back(n + i, n + i, potentials.difference[i] - two_mc2);
  }
  matrix_.resize(2 * n, 2 * n);
  matrix_.setFromTriplets(entries.begin(), entries.end());
  matrix_.makeCompressed();
}

namespace {

constexpr int kBand = 3;
constexpr int kLeading = 2 * kBand + kBand + 1;

// F_i -> 2i, G_i -> 2i + 1
Eigen::Index interleaved(Eigen::Index stacked_index, Eigen::Index n) {
  return stacked_index < n ? 2 * stacked_index : 2 * (stacked_index - n) + 1;
}

} // namespace

ShiftedInverse::ShiftedInverse(const DiracOperator &op, double shift)
    : shift_(shift), dimension_(op.dimension()) {
  if (!std::isfinite(shift)) {
    throw std::invalid_argument("shift must be finite");
  }
  const Eigen::Index dim = dimension_;
  const Eigen::Index n = dim / 2;
  band_.assign(static_cast<std::size_t>(kLeading * dim), 0.0);
  pivots_.assign(static_cast<std::size_t>(dim), 0);

  std::vector<double> column_sums(static_cast<std::size_t>(dim), 0.0);
  auto put = [&](Eigen::Index row, Eigen::Index col, double value) {
    const Eigen::Index i = interleaved(row, n);
    const Eigen::Index j = interleaved(col, n);
    if (std::abs(i - j) > kBand) {
      throw std::logic_error("Dirac operator is not banded");
    }
    band_[static_cast<std::size_t>(j * kLeading + (2 * kBand + i - j))] +=
        value;
    column_sums[static_cast<std::size_t>(j)] += std::abs(value);
  };

  const SparseMatrix &h = op.matrix();
  std::vector<double> diagonal(static_cast<std::size_t>(dim), 0.0);
  for (Eigen::Index row = 0; row < h.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(h, row); it; ++it) {
      if (it.col() == row) {
        diagonal[static_cast<std::size_t>(row)] = it.value();
      } else {
        put(row, it.col(), -it.value());
      }
    }
  }
  for (Eigen::Index k = 0; k < dim; ++k) {
    put(k, k, shift - diagonal[static_cast<std::size_t>(k)]);
  }
  double anorm = 0.0;
  for (double s : column_sums) {
    anorm = std::max(anorm, s);
  }

  const lapack_int size = static_cast<lapack_int>(dim);
  lapack_int info =
      LAPACKE_dgbtrf(LAPACK_COL_MAJOR, size, size, kBand, kBand, band_.data(),
                     kLeading, pivots_.data());
  if (info < 0) {
    throw std::logic_error("dgbtrf rejected its arguments");
  }
  if (info > 0) {
    std::ostringstream msg;
    msg << "shift " << shift
        << " coincides with an eigenvalue (zero pivot); perturb the shift";
    throw SingularShift(msg.str());
  }
  info = LAPACKE_dgbcon(LAPACK_COL_MAJOR, '1', size, kBand, kBand,
                        band_.data(), kLeading, pivots_.data(), anorm, &rcond_);
  if (info != 0) {
    throw std::logic_error("dgbcon failed");
  }
  if (rcond_ < 16.0 * DBL_EPSILON) {
    std::ostringstream msg;
    msg << "shift " << shift
        << " coincides with an eigenvalue (rcond = " << rcond_
        << "); perturb the shift";
    throw SingularShift(msg.str());
  }
}

// Triangular sweeps over the dgbtrf factors, the same operations as dgbtrs
// with one right-hand side. dgbtrs spends most of its time in per-column
// BLAS calls that are only a few elements long.
Vector ShiftedInverse::solve_impl(const Vector &b, char trans) const {
  if (b.size() != dimension_) {
    throw std::invalid_argument("solve: right-hand side has wrong length");
  }
  const Eigen::Index n = dimension_ / 2;
  const Eigen::Index dim = dimension_;
  constexpr int kUpper = 2 * kBand; // superdiagonals of U
  constexpr int kDiag = kUpper;     // row of the diagonal in the band
  const double *ab = band_.data();
  auto at = [ab](Eigen::Index row, Eigen::Index col) {
    return ab[col * kLeading + row];
  };
  const lapack_int *piv = pivots_.data();

  Vector x(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    x[interleaved(k, n)] = b[k];
  }
  if (trans == 'N') {
    // L: row swaps and unit lower multipliers
    for (Eigen::Index j = 0; j + 1 < dim; ++j) {
      const Eigen::Index l = piv[j] - 1;
      if (l != j) {
        std::swap(x[l], x[j]);
      }
      const double t = x[j];
      const Eigen::Index lm = std::min<Eigen::Index>(kBand, dim - 1 - j);
      for (Eigen::Index i = 1; i <= lm; ++i) {
        x[j + i] -= at(kDiag + i, j) * t;
      }
    }
    // U, back substitution
    for (Eigen::Index j = dim - 1; j >= 0; --j) {
      if (x[j] != 0.0) {
        x[j] /= at(kDiag, j);
        const double t = x[j];
        for (Eigen::Index i = j - 1; i >= std::max<Eigen::Index>(0, j - kUpper); --i) {
          x[i] -= t * at(kDiag + i - j, j);
        }
      }
    }
  } else {
    // U^T, forward substitution
    for (Eigen::Index j = 0; j < dim; ++j) {
      double t = x[j];
      for (Eigen::Index i = std::max<Eigen::Index>(0, j - kUpper); i < j; ++i) {
        t -= at(kDiag + i - j, j) * x[i];
      }
      x[j] = t / at(kDiag, j);
    }
    // L^T with the swaps undone in reverse
    for (Eigen::Index j = dim - 2; j >= 0; --j) {
      const Eigen::Index lm = std::min<Eigen::Index>(kBand, dim - 1 - j);
      double t = 0.0;
      for (Eigen::Index i = 1; i <= lm; ++i) {
        t += at(kDiag + i, j) * x[j + i];
      }
      x[j] -= t;
      const Eigen::Index l = piv[j] - 1;
      if (l != j) {
        std::swap(x[l], x[j]);
      }
    }
  }
  Vector out(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    out[k] = x[interleaved(k, n)];
  }
  return out;
}

Vector ShiftedInverse::solve(const Vector &b) const {
  return solve_impl(b, 'N');
}

Vector ShiftedInverse::solve_transpose(const Vector &b) const {
  return solve_impl(b, 'T');
}

SmallComponentMap::SmallComponentMap(const RadialMesh &mesh,
                                     const Potentials &potentials, int kappa,
                                     Units units)
    : upper_(mesh.upper()), lower_(mesh.lower()),
      centrifugal_(kappa * mesh.r().cwiseInverse()),
      offset_(2.0 * units.rest_energy - potentials.difference.array()),
      kinetic_(units.kinetic), scale_(Vector::Zero(mesh.size())) {
  if (kappa == 0) {
    throw std::invalid_argument("kappa = 0 is not a Dirac quantum number");
  }
}

void SmallComponentMap::set_energy(double energy) {
  if (!std::isfinite(energy)) {
    throw DiracSeaEntry("small-component energy is not finite");
  }
  const Eigen::ArrayXd denominator = energy + offset_.array();
  Eigen::Index worst = 0;
  if (denominator.minCoeff(&worst) <= 0.0) {
    std::ostringstream msg;
    msg << "small-component denominator eps - V + S + 2mc^2 = "
        << denominator[worst] << " <= 0 at mesh point " << worst + 1
        << " (eps = " << energy << "): the energy entered the Dirac sea";
    throw DiracSeaEntry(msg.str());
  }
  energy_ = energy;
  scale_ = kinetic_ / denominator;
}

Vector SmallComponentMap::apply(const Vector &F) const {
  const Eigen::Index n = F.size();
  Vector G(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double next = i + 1 < n ? F[i + 1] : 0.0;
    const double prev = i > 0 ? F[i - 1] : 0.0;
    G[i] = scale_[i] *
           (upper_[i] * next + lower_[i] * prev + centrifugal_[i] * F[i]);
  }
  return G;
}

Vector SmallComponentMap::apply_transpose(const Vector &g) const {
  const Eigen::Index n = g.size();
  const Vector s = scale_.cwiseProduct(g);
  Vector out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double from_prev = j > 0 ? upper_[j - 1] * s[j - 1] : 0.0;
    const double from_next = j + 1 < n ? lower_[j + 1] * s[j + 1] : 0.0;
    out[j] = from_prev + from_next + centrifugal_[j] * s[j];
  }
  return out;
}

Vector reconstruct_small(const Vector &F, double energy,
                         const Potentials &potentials, const RadialMesh &mesh,
                         int kappa, Units units) {
  SmallComponentMap map(mesh, potentials, kappa, units);
  map.set_energy(energy);
  return map.apply(F);
}

} // namespace diracnn
