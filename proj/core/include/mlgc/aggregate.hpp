#pragma once

#include <vector>

#include "mlgc/graph.hpp"
#include "mlgc/spd.hpp"

namespace mlgc {

enum class AggregationMethod { geometric, arithmetic };

struct AggregationConfig {
  // Shift added to each per-layer Laplacian before aggregation.  Values
  // <= 0 select the scale-aware default (1e-6 * mean Laplacian diagonal,
  // averaged over layers).
  double epsilon = 0.0;
  // Karcher flow step size (beta).  Stationary points of the flow are
  // independent of beta; beta in (0, 1] converges on well-conditioned input.
  double step_size = 1.0;
  // One iteration reproduces the reference behaviour; raise the cap to let
  // the flow run to the convergence tolerance.
  int max_iterations = 1;
  // Relative Frobenius change of the iterate below which the flow stops.
  double tolerance = 1e-8;
  // When true (default) the summed tangent logs are divided by the number of
  // layers, which makes the true Karcher mean the unique fixed point.  The
  // unnormalized variant applies the raw sum of logs instead; it reproduces
  // the update formula some references display, but it is *not* stationary
  // at the mean and is kept only for comparison.
  bool normalize_step = true;
};

// Euclidean (entrywise) mean of SPD matrices.  Throws ArgumentError on an
// empty list or mismatched dimensions.
SpdMatrix arithmetic_mean(const std::vector<SpdMatrix>& mats);

// Sum of the squared Riemannian distances from x to every matrix in mats —
// the objective the Karcher flow descends.
double karcher_cost(const SpdMatrix& x, const std::vector<SpdMatrix>& mats);

// Geometric (Karcher/Frechet) mean on the SPD manifold via fixed-point
// iteration
//   L_{t+1} = L_t^{1/2} Exp( (beta/S) sum_s Log(L_t^{-1/2} L_s L_t^{-1/2}) ) L_t^{1/2}
// started from the sum of the inputs.  With a single input the flow returns
// it unchanged (after one exact step); for two inputs it converges to the
// closed-form geodesic midpoint A^{1/2}(A^{-1/2}BA^{-1/2})^{1/2}A^{1/2}.
// If cost_trace is non-null it receives the Karcher cost of the initial
// iterate and of every subsequent one.
SpdMatrix geometric_mean(const std::vector<SpdMatrix>& mats,
                         const AggregationConfig& config = {},
                         std::vector<double>* cost_trace = nullptr);

// Full aggregation pipeline for a multilayer graph: per-layer Laplacians,
// shift by epsilon (config default: scale-aware), then the requested mean.
SpdMatrix aggregate_graph(const MultilayerGraph& graph, AggregationMethod method,
                          const AggregationConfig& config = {});

// The shifted per-layer Laplacians the aggregation operates on; exposed so
// callers can aggregate with custom schemes or inspect the inputs.
std::vector<SpdMatrix> shifted_layer_laplacians(const MultilayerGraph& graph,
                                                double epsilon = 0.0);

}  // namespace mlgc
