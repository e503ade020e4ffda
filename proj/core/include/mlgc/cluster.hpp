#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mlgc/embed.hpp"
#include "mlgc/spd.hpp"

namespace mlgc {

// A hard clustering of N points into K clusters.
struct Partition {
  std::vector<int> assignments;  // assignments[i] in [0, K)
  Eigen::MatrixXd centers;       // K x dim, centers.row(c) is cluster c
  double inertia = 0.0;          // sum of squared distances to own center
};

// One k-means run: k-means++ seeding followed by Lloyd iterations.  Empty
// clusters are repaired by reseeding on the point farthest from its center.
// If inertia_trace is non-null it receives the inertia after every Lloyd
// update (a non-increasing sequence).
Partition kmeans_single(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                        int max_iterations = 300, double tol = 1e-9,
                        std::vector<double>* inertia_trace = nullptr);

// Best of `restarts` independent k-means runs (ties keep the earliest run).
// Restart r uses the sub-seed derive_stream(seed, r), so results are a pure
// function of (points, k, restarts, seed).  Requires 1 <= k <= N.
Partition kmeans(const Eigen::MatrixXd& points, int k, int restarts = 10,
                 std::uint64_t seed = 0);

// Classic spectral clustering on an SPD (shifted) Laplacian: k-means on the
// rows of the K eigenvectors with smallest eigenvalues.
Partition spectral_clustering(const SpdMatrix& lap, int k, int restarts = 10,
                              std::uint64_t seed = 0);

// Index of the center nearest to `point` (squared Euclidean distance, ties
// toward the smaller index).
int nearest_center(const Eigen::MatrixXd& centers, const Eigen::RowVectorXd& point);

// Assign an unseen feature vector to a trained pipeline's clusters: embed,
// whiten with the stored Cholesky factor, pick the nearest center.
int classify(const EmbedderModel& model, const Eigen::MatrixXd& cholesky_factor,
             const Eigen::MatrixXd& centers, const Eigen::RowVectorXd& features);

// Row-wise batch version of classify.
std::vector<int> classify_all(const EmbedderModel& model,
                              const Eigen::MatrixXd& cholesky_factor,
                              const Eigen::MatrixXd& centers,
                              const Eigen::MatrixXd& features);

}  // namespace mlgc
