#include "diracnn/oracle.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace diracnn {

namespace {

using Block = Eigen::MatrixXd;

Vector stacked_weights(const RadialMesh &mesh) {
  const Eigen::Index n = mesh.size();
  Vector w(2 * n);
  w.head(n) = mesh.weights();
  w.tail(n) = mesh.weights();
  return w;
}

// Makes the columns of Y orthonormal in the weighted inner product.
// Cholesky QR applied twice; modified Gram-Schmidt if the Gram matrix is
// numerically indefinite.
void orthonormalize(Block &Y, const Vector &w) {
  for (int pass = 0; pass < 2; ++pass) {
    const Block gram = Y.transpose() * w.asDiagonal() * Y;
    Eigen::LLT<Block> llt(gram);
    if (llt.info() == Eigen::Success) {
      Y = llt.matrixU().solve<Eigen::OnTheRight>(Y);
      continue;
    }
    for (Eigen::Index j = 0; j < Y.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        Y.col(j) -= Y.col(i).dot(w.asDiagonal() * Y.col(j)) * Y.col(i);
      }
      const double nrm = std::sqrt(Y.col(j).dot(w.asDiagonal() * Y.col(j)));
      if (!(nrm > 0.0)) {
        throw OracleNonConvergence("block iteration lost rank", INFINITY);
      }
      Y.col(j) /= nrm;
    }
  }
}

double weighted_norm(const Vector &v, const Vector &w) {
  return std::sqrt(v.dot(w.asDiagonal() * v));
}

struct RoughnessForms {
  Block diff;
  Block sum;
};

// Quadratic forms of neighbour differences and neighbour sums restricted
// to the span of the columns of V.
RoughnessForms roughness_forms(const Block &V, Eigen::Index n) {
  const Eigen::Index p = V.cols();
  Block d(2 * (n - 1), p), s(2 * (n - 1), p);
  for (Eigen::Index c = 0; c < 2; ++c) {
    const auto part = V.middleRows(c * n, n);
    d.middleRows(c * (n - 1), n - 1) =
        part.bottomRows(n - 1) - part.topRows(n - 1);
    s.middleRows(c * (n - 1), n - 1) =
        part.bottomRows(n - 1) + part.topRows(n - 1);
  }
  return {d.transpose() * d, s.transpose() * s};
}

EigenPair make_pair(const DiracOperator &op, const Vector &v, const Vector &w,
                    int iterations, double roughness_limit) {
  const Vector hv = op.apply(v);
  const double den = v.dot(w.asDiagonal() * v);
  EigenPair pair;
  pair.energy = v.dot(w.asDiagonal() * hv) / den;
  pair.residual = weighted_norm(hv - pair.energy * v, w) / std::sqrt(den);
  pair.iterations = iterations;
  const Vector u = v / std::sqrt(den);
  pair.state = sign_fixed(RadialSpinor::unstack(u));
  pair.roughness = roughness(pair.state);
  pair.physical = pair.roughness < roughness_limit;
  return pair;
}

// Converged Ritz vectors for the `want` eigenvalues nearest the shift,
// ordered by distance from the shift, staggered states included.
std::vector<EigenPair> block_iteration(const DiracOperator &op,
                                       const ShiftedInverse &inverse, int want,
                                       const OracleOptions &options) {
  const RadialMesh &mesh = op.mesh();
  const Eigen::Index dim = op.dimension();
  const Vector w = stacked_weights(mesh);
  const double shift = inverse.shift();
  want = static_cast<int>(std::min<Eigen::Index>(want, dim));
  const Eigen::Index p =
      std::min<Eigen::Index>(want + std::max(options.block_extra, 1), dim);

  std::mt19937_64 engine(options.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Block V(dim, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      V(i, j) = dist(engine);
    }
  }
  orthonormalize(V, w);

  Vector theta;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  double worst = INFINITY;
  int it = 0;
  for (it = 1; it <= options.max_iterations; ++it) {
    for (Eigen::Index j = 0; j < p; ++j) {
      V.col(j) = inverse.solve(V.col(j));
    }
    orthonormalize(V, w);
    Block HV = op.matrix() * V;
    Block T = V.transpose() * w.asDiagonal() * HV;
    T = 0.5 * (T + T.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Block> ritz(T);
    theta = ritz.eigenvalues();
    V = V * ritz.eigenvectors();
    HV = HV * ritz.eigenvectors();

    for (Eigen::Index j = 0; j < p; ++j) {
      order[static_cast<std::size_t>(j)] = j;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) {
                       return std::abs(theta[a] - shift) <
                              std::abs(theta[b] - shift);
                     });
    worst = 0.0;
    for (int k = 0; k < want; ++k) {
      const Eigen::Index j = order[static_cast<std::size_t>(k)];
      const double res = weighted_norm(HV.col(j) - theta[j] * V.col(j), w);
      worst = std::max(worst,
                       res / (options.tolerance * std::max(1.0, std::abs(theta[j]))));
    }
    if (worst <= 1.0) {
      break;
    }
  }
  if (worst > 1.0) {
    std::ostringstream msg;
    msg << "shift-invert iteration did not converge after "
        << options.max_iterations << " iterations (worst residual "
        << worst * options.tolerance << " relative)";
    throw OracleNonConvergence(msg.str(), worst * options.tolerance);
  }

  std::vector<EigenPair> pairs;
  for (int k = 0; k < want; ++k) {
    const Eigen::Index j = order[static_cast<std::size_t>(k)];
    pairs.push_back(make_pair(op, V.col(j), w,
                              std::min(it, options.max_iterations),
                              options.roughness_limit));
  }
  return pairs;
}

// Within each cluster of nearly equal energies the physical level and its
// staggered partner mix freely; rotate to the combinations that extremize
// the roughness ratio so the smooth one can be told apart.
void separate_clusters(const DiracOperator &op, std::vector<EigenPair> &pairs,
                       const OracleOptions &options) {
  std::sort(pairs.begin(), pairs.end(),
            [](const EigenPair &a, const EigenPair &b) {
              return a.energy < b.energy;
            });
  const Vector w = stacked_weights(op.mesh());
  const Eigen::Index n = op.mesh().size();
  std::size_t begin = 0;
  while (begin < pairs.size()) {
    std::size_t end = begin + 1;
    while (end < pairs.size() &&
           std::abs(pairs[end].energy - pairs[end - 1].energy) <=
               options.cluster_gap *
                   std::max(std::abs(pairs[end].energy),
                            std::abs(pairs[end - 1].energy))) {
      ++end;
    }
    if (end - begin > 1) {
      Block V(2 * n, static_cast<Eigen::Index>(end - begin));
      for (std::size_t k = begin; k < end; ++k) {
        V.col(static_cast<Eigen::Index>(k - begin)) = pairs[k].state.stacked();
      }
      const RoughnessForms forms = roughness_forms(V, n);
      Eigen::GeneralizedSelfAdjointEigenSolver<Block> gen(forms.diff, forms.sum);
      const Block X = gen.eigenvectors();
      const int iterations = pairs[begin].iterations;
      for (Eigen::Index c = 0; c < X.cols(); ++c) {
        pairs[begin + static_cast<std::size_t>(c)] =
            make_pair(op, V * X.col(c), w, iterations, options.roughness_limit);
      }
    }
    begin = end;
  }
}

std::vector<EigenPair> classified(const DiracOperator &op,
                                  const ShiftedInverse &inverse, int want,
                                  const OracleOptions &options) {
  std::vector<EigenPair> pairs = block_iteration(op, inverse, want, options);
  separate_clusters(op, pairs, options);
  return pairs;
}

void order_by_distance(std::vector<EigenPair> &pairs, double shift) {
  std::stable_sort(pairs.begin(), pairs.end(),
                   [shift](const EigenPair &a, const EigenPair &b) {
                     return std::abs(a.energy - shift) <
                            std::abs(b.energy - shift);
                   });
}

} // namespace

double roughness(const RadialSpinor &state) {
  const Eigen::Index n = state.F.size();
  if (n < 2) {
    return 0.0;
  }
  double diff = 0.0;
  double sum = 0.0;
  for (const Vector *c : {&state.F, &state.G}) {
    const auto lo = c->head(n - 1).array();
    const auto hi = c->tail(n - 1).array();
    diff += (hi - lo).square().sum();
    sum += (hi + lo).square().sum();
  }
  if (sum > 0.0) {
    return diff / sum;
  }
  return diff > 0.0 ? INFINITY : 0.0;
}

std::vector<EigenPair> shift_invert_eigs(const DiracOperator &op,
                                         const ShiftedInverse &inverse, int k,
                                         const OracleOptions &options) {
  if (k < 1) {
    throw std::invalid_argument("shift_invert_eigs: k must be >= 1");
  }
  const int dim = static_cast<int>(op.dimension());
  // widening the block past this only reaches levels far from the shift,
  // where iteration stalls; a mesh this short of smooth states is too coarse
  const int limit = std::min(dim, 16 * k + 32);
  const int first = std::min(dim, 2 * k + 2);
  int want = first;
  std::vector<EigenPair> pairs;
  auto too_few = [&](int have) {
    std::ostringstream msg;
    msg << "only " << have << " of " << k << " requested states among the "
        << want << " levels nearest " << inverse.shift()
        << " are smooth; the mesh may be too coarse to resolve them";
    return OracleNonConvergence(msg.str(), INFINITY);
  };
  for (;;) {
    try {
      pairs = classified(op, inverse, want, options);
    } catch (const OracleNonConvergence &) {
      if (want == first) {
        throw;
      }
      throw too_few(static_cast<int>(pairs.size()));
    }
    if (options.physical_only) {
      std::erase_if(pairs, [](const EigenPair &p) { return !p.physical; });
    }
    order_by_distance(pairs, inverse.shift());
    const int have = static_cast<int>(pairs.size());
    if (have >= k) {
      break;
    }
    if (want >= limit) {
      throw too_few(have);
    }
    want = std::min(limit, want + k - have + 1);
  }
  if (static_cast<int>(pairs.size()) > k) {
    pairs.resize(static_cast<std::size_t>(k));
  }
  return pairs;
}

std::vector<EigenPair> shift_invert_eigs(const DiracOperator &op, double shift,
                                         int k, const OracleOptions &options) {
  const ShiftedInverse inverse(op, shift);
  return shift_invert_eigs(op, inverse, k, options);
}

std::vector<EigenPair> levels_below(const DiracOperator &op, double shift,
                                    double cutoff,
                                    const OracleOptions &options,
                                    int max_levels) {
  if (!(cutoff > shift)) {
    throw std::invalid_argument("levels_below: cutoff must exceed the shift");
  }
  const ShiftedInverse inverse(op, shift);
  const int dim = static_cast<int>(op.dimension());
  int want = 8;
  std::vector<EigenPair> pairs;
  for (;;) {
    pairs = classified(op, inverse, want, options);
    double farthest = -INFINITY;
    for (const EigenPair &p : pairs) {
      if (p.energy < shift) {
        throw std::invalid_argument(
            "levels_below: found a level below the shift; lower the shift");
      }
      farthest = std::max(farthest, p.energy);
    }
    std::erase_if(pairs, [&](const EigenPair &p) {
      return p.energy > cutoff || (options.physical_only && !p.physical);
    });
    if (farthest > cutoff || want >= dim ||
        static_cast<int>(pairs.size()) >= max_levels) {
      break;
    }
    want *= 2;
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const EigenPair &a, const EigenPair &b) {
              return a.energy < b.energy;
            });
  if (static_cast<int>(pairs.size()) > max_levels) {
    pairs.resize(static_cast<std::size_t>(max_levels));
  }
  return pairs;
}

} // namespace diracnn
