#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mlgc/spd.hpp"

namespace mlgc {

// Dense node feature matrix, one row per node.  Construction rejects empty
// matrices and non-finite values.
class FeatureMatrix {
 public:
  explicit FeatureMatrix(Eigen::MatrixXd values);

  int num_nodes() const { return static_cast<int>(values_.rows()); }
  int dim() const { return static_cast<int>(values_.cols()); }
  const Eigen::MatrixXd& matrix() const { return values_; }

 private:
  Eigen::MatrixXd values_;
};

// A fixed node set observed through S >= 1 weighted undirected layers.
// Every layer is an N x N adjacency matrix; construction enforces symmetry
// (within rounding), zero diagonals and non-negative weights, then stores
// the exactly symmetrized matrices.
class MultilayerGraph {
 public:
  MultilayerGraph(int num_vertices, std::vector<Eigen::MatrixXd> layers);

  int num_vertices() const { return num_vertices_; }
  int num_layers() const { return static_cast<int>(layers_.size()); }
  const Eigen::MatrixXd& layer(int s) const;
  const std::vector<Eigen::MatrixXd>& layers() const { return layers_; }

  // Total number of undirected edges (nonzero upper-triangular entries)
  // summed over layers; used for dataset manifests.
  long long num_edges() const;

 private:
  int num_vertices_;
  std::vector<Eigen::MatrixXd> layers_;
};

// Combinatorial Laplacian L = D - W of one adjacency matrix.  Validates the
// same invariants as MultilayerGraph (square, symmetric, zero diagonal,
// non-negative weights).  The result is symmetric PSD with row sums zero.
Eigen::MatrixXd laplacian(const Eigen::MatrixXd& adjacency);

// Scale-aware default shift for shifted_laplacian: 1e-6 times the mean
// diagonal (mean degree) of the Laplacian, with a small absolute floor so
// edgeless graphs still receive a positive shift.
double default_shift(const Eigen::MatrixXd& lap);

// L + eps*I.  A Laplacian is only positive semidefinite (the all-ones vector
// is in its kernel), so every routine that needs definiteness works with
// this shifted version.  eps must be > 0.
SpdMatrix shifted_laplacian(const Eigen::MatrixXd& lap, double eps);

// Symmetrized k-nearest-neighbour graph of a point cloud (one row per
// point).  Edge i~j exists when i is among the k nearest of j *or* vice
// versa (union rule); its weight is 1/distance.  Exact ties in distance are
// broken toward the smaller index.  Coincident points get the capped weight
// 1/delta where delta = 1e-9 * median nonzero pairwise distance.
// Requires 1 <= k < number of points.
Eigen::MatrixXd knn_layer(const Eigen::MatrixXd& points, int k);

// Restriction of every layer (and the vertex set) to `vertices`, in the
// given order.  Indices must be valid and distinct.
MultilayerGraph induced_subgraph(const MultilayerGraph& graph,
                                 const std::vector<int>& vertices);

}  // namespace mlgc
