#include "mlgc/aggregate.hpp"

#include <cmath>
#include <sstream>

#include "mlgc/errors.hpp"

namespace mlgc {

namespace {

void require_same_dims(const std::vector<SpdMatrix>& mats, const char* who) {
  if (mats.empty()) {
    throw ArgumentError(std::string(who) + ": empty matrix list");
  }
  const int dim = mats.front().dim();
  for (const auto& m : mats) {
    if (m.dim() != dim) {
      std::ostringstream msg;
      msg << who << ": dimension mismatch, " << m.dim() << " vs " << dim;
      throw ArgumentError(msg.str());
    }
  }
}

}  // namespace

SpdMatrix arithmetic_mean(const std::vector<SpdMatrix>& mats) {
  require_same_dims(mats, "arithmetic_mean");
  Eigen::MatrixXd sum = mats.front().matrix();
  for (std::size_t s = 1; s < mats.size(); ++s) {
    sum += mats[s].matrix();
  }
  return SpdMatrix(sum / static_cast<double>(mats.size()));
}

double karcher_cost(const SpdMatrix& x, const std::vector<SpdMatrix>& mats) {
  require_same_dims(mats, "karcher_cost");
  double cost = 0.0;
  for (const auto& m : mats) {
    cost += riemann_dist(x, m);
  }
  return cost;
}

SpdMatrix geometric_mean(const std::vector<SpdMatrix>& mats,
                         const AggregationConfig& config,
                         std::vector<double>* cost_trace) {
  require_same_dims(mats, "geometric_mean");
  if (!(config.step_size > 0.0)) {
    std::ostringstream msg;
    msg << "geometric_mean: step size must be positive, got " << config.step_size;
    throw ArgumentError(msg.str());
  }
  if (config.max_iterations < 0) {
    throw ArgumentError("geometric_mean: max_iterations must be >= 0");
  }

  const double num_layers = static_cast<double>(mats.size());
  const double factor =
      config.normalize_step ? config.step_size / num_layers : config.step_size;

  // Start from the sum (not the mean) of the inputs.
  Eigen::MatrixXd sum = mats.front().matrix();
  for (std::size_t s = 1; s < mats.size(); ++s) {
    sum += mats[s].matrix();
  }
  SpdMatrix iterate{sum};
  if (cost_trace) {
    cost_trace->clear();
    cost_trace->push_back(karcher_cost(iterate, mats));
  }

  for (int t = 0; t < config.max_iterations; ++t) {
    const SqrtPair roots = spd_sqrt_pair(iterate);
    const Eigen::MatrixXd& half = roots.sqrt.matrix();
    const Eigen::MatrixXd& inv_half = roots.inv_sqrt.matrix();

    Eigen::MatrixXd tangent = Eigen::MatrixXd::Zero(iterate.dim(), iterate.dim());
    for (const auto& m : mats) {
      tangent += spd_log(SpdMatrix(inv_half * m.matrix() * inv_half));
    }

    const SpdMatrix step = spd_exp(factor * tangent);
    SpdMatrix next{half * step.matrix() * half};

    const double change = (next.matrix() - iterate.matrix()).norm();
    const double scale = iterate.matrix().norm();
    iterate = std::move(next);
    if (cost_trace) {
      cost_trace->push_back(karcher_cost(iterate, mats));
    }
    if (change <= config.tolerance * scale) {
      break;
    }
  }
  return iterate;
}

std::vector<SpdMatrix> shifted_layer_laplacians(const MultilayerGraph& graph,
                                                double epsilon) {
  std::vector<Eigen::MatrixXd> laps;
  laps.reserve(static_cast<std::size_t>(graph.num_layers()));
  for (const auto& w : graph.layers()) {
    laps.push_back(laplacian(w));
  }

  double eps = epsilon;
  if (!(eps > 0.0)) {
    // Scale-aware default, averaged over layers so all layers get one shift.
    double mean_shift = 0.0;
    for (const auto& lap : laps) {
      mean_shift += default_shift(lap);
    }
    eps = mean_shift / static_cast<double>(laps.size());
  }

  std::vector<SpdMatrix> shifted;
  shifted.reserve(laps.size());
  for (const auto& lap : laps) {
    shifted.push_back(shifted_laplacian(lap, eps));
  }
  return shifted;
}

SpdMatrix aggregate_graph(const MultilayerGraph& graph, AggregationMethod method,
                          const AggregationConfig& config) {
  const std::vector<SpdMatrix> shifted =
      shifted_layer_laplacians(graph, config.epsilon);
  if (method == AggregationMethod::arithmetic) {
    return arithmetic_mean(shifted);
  }
  return geometric_mean(shifted, config);
}

}  // namespace mlgc
