#include "mlgc/cluster.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mlgc/errors.hpp"
#include "mlgc/rng.hpp"

namespace mlgc {

namespace {

void check_clustering_args(const Eigen::MatrixXd& points, int k, const char* who) {
  if (points.rows() == 0 || points.cols() == 0) {
    throw ArgumentError(std::string(who) + ": empty point matrix");
  }
  if (!points.allFinite()) {
    throw ArgumentError(std::string(who) + ": points have non-finite coordinates");
  }
  if (k < 1 || k > points.rows()) {
    std::ostringstream msg;
    msg << who << ": k=" << k << " must satisfy 1 <= k <= " << points.rows();
    throw ArgumentError(msg.str());
  }
}

// k-means++ seeding: first center uniform, then each next center drawn with
// probability proportional to the squared distance to the nearest chosen one.
Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& points, int k,
                             std::mt19937_64& rng) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd centers(k, points.cols());

  std::uniform_int_distribution<Eigen::Index> uniform_point(0, n - 1);
  centers.row(0) = points.row(uniform_point(rng));

  Eigen::VectorXd d2 =
      (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index chosen;
    if (total > 0.0) {
      std::uniform_real_distribution<double> uniform_mass(0.0, total);
      const double target = uniform_mass(rng);
      double cumulative = 0.0;
      chosen = n - 1;  // guards against rounding in the final bucket
      for (Eigen::Index i = 0; i < n; ++i) {
        cumulative += d2[i];
        if (cumulative > target) {
          chosen = i;
          break;
        }
      }
    } else {
      // All remaining mass is zero (duplicate points): fall back to uniform.
      chosen = uniform_point(rng);
    }
    centers.row(c) = points.row(chosen);
    d2 = d2.cwiseMin(
        (points.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

}  // namespace

int nearest_center(const Eigen::MatrixXd& centers, const Eigen::RowVectorXd& point) {
  if (centers.rows() == 0 || centers.cols() != point.size()) {
    throw ArgumentError("nearest_center: centers and point dimensions do not match");
  }
  int best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centers.rows(); ++c) {
    const double d2 = (centers.row(c) - point).squaredNorm();
    if (d2 < best_d2) {  // strict: ties keep the smaller index
      best_d2 = d2;
      best = static_cast<int>(c);
    }
  }
  return best;
}

Partition kmeans_single(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                        int max_iterations, double tol,
                        std::vector<double>* inertia_trace) {
  check_clustering_args(points, k, "kmeans_single");
  if (max_iterations < 1) {
    throw ArgumentError("kmeans_single: max_iterations must be >= 1");
  }

  const Eigen::Index n = points.rows();
  std::mt19937_64 rng(seed);

  Partition part;
  part.centers = seed_centers(points, k, rng);
  part.assignments.assign(static_cast<std::size_t>(n), 0);
  if (inertia_trace) inertia_trace->clear();

  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  double prev_inertia = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < max_iterations; ++iter) {
    // Assignment step.
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = nearest_center(part.centers, points.row(i));
      if (c != part.assignments[static_cast<std::size_t>(i)]) {
        part.assignments[static_cast<std::size_t>(i)] = c;
        changed = true;
      }
    }

    // Repair empty clusters: move each empty center onto the point currently
    // farthest from its own center, then redo the assignment.
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      ++counts[static_cast<std::size_t>(part.assignments[static_cast<std::size_t>(i)])];
    }
    bool repaired = false;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Eigen::Index farthest = 0;
      double far_d2 = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int a = part.assignments[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(a)] <= 1) continue;  // keep singletons
        const double d2 = (points.row(i) - part.centers.row(a)).squaredNorm();
        if (d2 > far_d2) {
          far_d2 = d2;
          farthest = i;
        }
      }
      part.centers.row(c) = points.row(farthest);
      --counts[static_cast<std::size_t>(
          part.assignments[static_cast<std::size_t>(farthest)])];
      part.assignments[static_cast<std::size_t>(farthest)] = c;
      counts[static_cast<std::size_t>(c)] = 1;
      repaired = true;
      changed = true;
    }
    if (repaired) {
      // Re-run the assignment against the repaired centers.
      for (Eigen::Index i = 0; i < n; ++i) {
        const int c = nearest_center(part.centers, points.row(i));
        part.assignments[static_cast<std::size_t>(i)] = c;
      }
      std::fill(counts.begin(), counts.end(), 0);
      for (Eigen::Index i = 0; i < n; ++i) {
        ++counts[static_cast<std::size_t>(
            part.assignments[static_cast<std::size_t>(i)])];
      }
    }

    // Update step.
    part.centers.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      part.centers.row(part.assignments[static_cast<std::size_t>(i)]) +=
          points.row(i);
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        part.centers.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      }
    }

    part.inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      part.inertia +=
          (points.row(i) -
           part.centers.row(part.assignments[static_cast<std::size_t>(i)]))
              .squaredNorm();
    }
    if (inertia_trace) inertia_trace->push_back(part.inertia);

    if (!changed) break;
    if (std::isfinite(prev_inertia) &&
        prev_inertia - part.inertia <= tol * prev_inertia) {
      break;
    }
    prev_inertia = part.inertia;
  }
  return part;
}

Partition kmeans(const Eigen::MatrixXd& points, int k, int restarts,
                 std::uint64_t seed) {
  check_clustering_args(points, k, "kmeans");
  if (restarts < 1) {
    throw ArgumentError("kmeans: restarts must be >= 1");
  }
  Partition best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Partition candidate =
        kmeans_single(points, k, derive_stream(seed, static_cast<std::uint64_t>(r)));
    if (candidate.inertia < best.inertia) {
      best = std::move(candidate);
    }
  }
  return best;
}

Partition spectral_clustering(const SpdMatrix& lap, int k, int restarts,
                              std::uint64_t seed) {
  if (k < 1 || k > lap.dim()) {
    std::ostringstream msg;
    msg << "spectral_clustering: k=" << k << " must satisfy 1 <= k <= "
        << lap.dim();
    throw ArgumentError(msg.str());
  }
  // Eigenvalues come back ascending, so the first K columns span the
  // smallest invariant subspace.
  const SymEig eig = sym_eig(lap.matrix());
  return kmeans(eig.eigenvectors.leftCols(k), k, restarts, seed);
}

int classify(const EmbedderModel& model, const Eigen::MatrixXd& cholesky_factor,
             const Eigen::MatrixXd& centers, const Eigen::RowVectorXd& features) {
  const Eigen::MatrixXd embedded =
      embed_points(model, cholesky_factor, features);
  return nearest_center(centers, embedded.row(0));
}

std::vector<int> classify_all(const EmbedderModel& model,
                              const Eigen::MatrixXd& cholesky_factor,
                              const Eigen::MatrixXd& centers,
                              const Eigen::MatrixXd& features) {
  const Eigen::MatrixXd embedded = embed_points(model, cholesky_factor, features);
  std::vector<int> out(static_cast<std::size_t>(embedded.rows()));
  for (Eigen::Index i = 0; i < embedded.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = nearest_center(centers, embedded.row(i));
  }
  return out;
}

}  // namespace mlgc
