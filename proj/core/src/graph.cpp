#include "mlgc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "mlgc/errors.hpp"

namespace mlgc {

namespace {

// Validate one adjacency matrix and return its exactly symmetrized copy.
Eigen::MatrixXd check_adjacency(const Eigen::MatrixXd& w, int expected_n,
                                const char* who) {
  if (w.rows() != w.cols()) {
    std::ostringstream msg;
    msg << who << ": adjacency must be square, got " << w.rows() << "x"
        << w.cols();
    throw ArgumentError(msg.str());
  }
  if (expected_n >= 0 && w.rows() != expected_n) {
    std::ostringstream msg;
    msg << who << ": adjacency is " << w.rows() << "x" << w.cols()
        << " but the graph has " << expected_n << " vertices";
    throw ArgumentError(msg.str());
  }
  if (w.rows() == 0) {
    throw ArgumentError(std::string(who) + ": adjacency is empty");
  }
  if (!w.allFinite()) {
    throw ArgumentError(std::string(who) + ": adjacency has non-finite entries");
  }
  if (w.minCoeff() < 0.0) {
    std::ostringstream msg;
    msg << who << ": negative edge weight " << w.minCoeff();
    throw ArgumentError(msg.str());
  }

  const double scale = std::max(w.cwiseAbs().maxCoeff(), 1.0);
  const double asym = (w - w.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    std::ostringstream msg;
    msg << who << ": adjacency is not symmetric (max |W - W^T| = " << asym
        << ")";
    throw ArgumentError(msg.str());
  }
  if (w.diagonal().cwiseAbs().maxCoeff() > 1e-12 * scale) {
    std::ostringstream msg;
    msg << who << ": self-loop weight " << w.diagonal().cwiseAbs().maxCoeff()
        << " on the diagonal";
    throw ArgumentError(msg.str());
  }

  Eigen::MatrixXd sym = 0.5 * (w + w.transpose());
  sym.diagonal().setZero();
  return sym;
}

}  // namespace

FeatureMatrix::FeatureMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() == 0 || values_.cols() == 0) {
    throw ArgumentError("FeatureMatrix: matrix is empty");
  }
  if (!values_.allFinite()) {
    throw ArgumentError("FeatureMatrix: matrix has non-finite entries");
  }
}

MultilayerGraph::MultilayerGraph(int num_vertices,
                                 std::vector<Eigen::MatrixXd> layers)
    : num_vertices_(num_vertices), layers_(std::move(layers)) {
  if (num_vertices_ <= 0) {
    throw ArgumentError("MultilayerGraph: number of vertices must be positive");
  }
  if (layers_.empty()) {
    throw ArgumentError("MultilayerGraph: at least one layer is required");
  }
  for (auto& layer : layers_) {
    layer = check_adjacency(layer, num_vertices_, "MultilayerGraph");
  }
}

const Eigen::MatrixXd& MultilayerGraph::layer(int s) const {
  if (s < 0 || s >= num_layers()) {
    std::ostringstream msg;
    msg << "MultilayerGraph::layer: index " << s << " out of range [0, "
        << num_layers() << ")";
    throw ArgumentError(msg.str());
  }
  return layers_[static_cast<std::size_t>(s)];
}

long long MultilayerGraph::num_edges() const {
  long long m = 0;
  for (const auto& w : layers_) {
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < w.cols(); ++j) {
        if (w(i, j) != 0.0) ++m;
      }
    }
  }
  return m;
}

Eigen::MatrixXd laplacian(const Eigen::MatrixXd& adjacency) {
  const Eigen::MatrixXd w = check_adjacency(adjacency, -1, "laplacian");
  Eigen::MatrixXd lap = -w;
  lap.diagonal() = w.rowwise().sum();
  return lap;
}

double default_shift(const Eigen::MatrixXd& lap) {
  const double mean_degree = lap.diagonal().mean();
  return std::max(1e-6 * mean_degree, 1e-12);
}

SpdMatrix shifted_laplacian(const Eigen::MatrixXd& lap, double eps) {
  if (!(eps > 0.0)) {
    std::ostringstream msg;
    msg << "shifted_laplacian: shift must be positive, got " << eps;
    throw ArgumentError(msg.str());
  }
  Eigen::MatrixXd shifted = lap;
  shifted.diagonal().array() += eps;
  return SpdMatrix(std::move(shifted));
}

Eigen::MatrixXd knn_layer(const Eigen::MatrixXd& points, int k) {
  const Eigen::Index n = points.rows();
  if (n < 2) {
    throw ArgumentError("knn_layer: need at least two points");
  }
  if (!points.allFinite()) {
    throw ArgumentError("knn_layer: points have non-finite coordinates");
  }
  if (k < 1 || k >= n) {
    std::ostringstream msg;
    msg << "knn_layer: k=" << k << " must satisfy 1 <= k < " << n;
    throw ArgumentError(msg.str());
  }

  // Squared distances via the Gram matrix; clamp tiny negatives from
  // cancellation.
  const Eigen::VectorXd sq = points.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = sq.replicate(1, n) + sq.transpose().replicate(n, 1) -
                       2.0 * (points * points.transpose());
  d2 = d2.cwiseMax(0.0);
  d2.diagonal().setZero();

  // Weight cap for coincident points: 1/delta with delta proportional to the
  // median nonzero pairwise distance.  Computed lazily since most inputs
  // have no duplicates.
  double cap = -1.0;
  auto capped_weight = [&](double dist) {
    if (dist > 0.0) return 1.0 / dist;
    if (cap < 0.0) {
      std::vector<double> nonzero;
      nonzero.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
          if (d2(i, j) > 0.0) nonzero.push_back(std::sqrt(d2(i, j)));
        }
      }
      double median = 1.0;  // all points coincident: fall back to unit scale
      if (!nonzero.empty()) {
        const std::size_t mid = nonzero.size() / 2;
        std::nth_element(nonzero.begin(), nonzero.begin() + mid, nonzero.end());
        median = nonzero[mid];
      }
      cap = 1.0 / (1e-9 * median);
    }
    return cap;
  };

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    order.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    // Nearest k of point i; ties in distance resolved toward smaller index.
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                        if (d2(i, a) != d2(i, b)) return d2(i, a) < d2(i, b);
                        return a < b;
                      });
    for (int r = 0; r < k; ++r) {
      const Eigen::Index j = order[static_cast<std::size_t>(r)];
      const double weight = capped_weight(std::sqrt(d2(i, j)));
      // Union symmetrization: keep the edge once either endpoint selects it.
      w(i, j) = weight;
      w(j, i) = weight;
    }
  }
  return w;
}

MultilayerGraph induced_subgraph(const MultilayerGraph& graph,
                                 const std::vector<int>& vertices) {
  if (vertices.empty()) {
    throw ArgumentError("induced_subgraph: empty vertex list");
  }
  std::vector<bool> seen(static_cast<std::size_t>(graph.num_vertices()), false);
  for (int v : vertices) {
    if (v < 0 || v >= graph.num_vertices()) {
      std::ostringstream msg;
      msg << "induced_subgraph: vertex " << v << " out of range [0, "
          << graph.num_vertices() << ")";
      throw ArgumentError(msg.str());
    }
    if (seen[static_cast<std::size_t>(v)]) {
      std::ostringstream msg;
      msg << "induced_subgraph: duplicate vertex " << v;
      throw ArgumentError(msg.str());
    }
    seen[static_cast<std::size_t>(v)] = true;
  }

  const Eigen::Index m = static_cast<Eigen::Index>(vertices.size());
  std::vector<Eigen::MatrixXd> sub;
  sub.reserve(static_cast<std::size_t>(graph.num_layers()));
  for (const auto& w : graph.layers()) {
    Eigen::MatrixXd ws(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) {
        ws(a, b) = w(vertices[static_cast<std::size_t>(a)],
                     vertices[static_cast<std::size_t>(b)]);
      }
    }
    sub.push_back(std::move(ws));
  }
  return MultilayerGraph(static_cast<int>(m), std::move(sub));
}

}  // namespace mlgc
