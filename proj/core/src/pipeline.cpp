#include "mlgc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "mlgc/errors.hpp"
#include "mlgc/rng.hpp"

namespace mlgc {

namespace {

// Stream ids hung off the pipeline master seed.
constexpr std::uint64_t kStreamModelInit = 1;
constexpr std::uint64_t kStreamKmeans = 2;
constexpr std::uint64_t kStreamSubsets = 3;

int resolve_num_clusters(const DatasetBundle& bundle, const PipelineConfig& config) {
  if (config.num_clusters > 0) return config.num_clusters;
  if (!bundle.labels) {
    throw ArgumentError(
        "run_pipeline: num_clusters not set and the dataset has no labels to infer it from");
  }
  return *std::max_element(bundle.labels->begin(), bundle.labels->end()) + 1;
}

}  // namespace

PipelineResult run_pipeline(const DatasetBundle& bundle, const PipelineConfig& config,
                            const std::function<void(int, double)>& progress) {
  const int k = resolve_num_clusters(bundle, config);
  if (k < 1 || k > bundle.graph.num_vertices()) {
    std::ostringstream msg;
    msg << "run_pipeline: num_clusters=" << k << " must satisfy 1 <= k <= "
        << bundle.graph.num_vertices();
    throw ArgumentError(msg.str());
  }
  if (bundle.features.num_nodes() != bundle.graph.num_vertices()) {
    throw ArgumentError("run_pipeline: feature rows do not match graph vertices");
  }

  SpdMatrix aggregated = aggregate_graph(bundle.graph, config.method, config.aggregation);

  std::vector<int> layer_sizes;
  layer_sizes.reserve(config.hidden_sizes.size() + 2);
  layer_sizes.push_back(bundle.features.dim());
  layer_sizes.insert(layer_sizes.end(), config.hidden_sizes.begin(),
                     config.hidden_sizes.end());
  layer_sizes.push_back(k);
  EmbedderModel model(layer_sizes, derive_stream(config.seed, kStreamModelInit));

  EmbeddingResult embedding =
      train(model, bundle.features.matrix(), aggregated, config.training, progress);

  Partition partition = kmeans(embedding.whitened, k, config.kmeans_restarts,
                               derive_stream(config.seed, kStreamKmeans));

  std::optional<MetricsReport> metrics;
  if (bundle.labels) {
    metrics = evaluate_clustering(partition.assignments, *bundle.labels);
  }

  return PipelineResult{std::move(aggregated), std::move(model),
                        std::move(embedding), std::move(partition),
                        std::move(metrics)};
}

GeneralizationReport run_generalization(const DatasetBundle& bundle,
                                        const PipelineConfig& config,
                                        double train_fraction, int repeats) {
  if (!bundle.labels) {
    throw ArgumentError("run_generalization: dataset has no ground-truth labels");
  }
  if (!(train_fraction > 0.0) || train_fraction > 1.0) {
    throw ArgumentError("run_generalization: train_fraction must lie in (0, 1]");
  }
  if (repeats < 1) {
    throw ArgumentError("run_generalization: repeats must be >= 1");
  }

  const int n = bundle.graph.num_vertices();
  const int subset_size = std::max(1, static_cast<int>(std::floor(train_fraction * n)));
  const int k = resolve_num_clusters(bundle, config);

  GeneralizationReport report;
  report.train_fraction = train_fraction;

  {
    const PipelineResult full = run_pipeline(bundle, config);
    report.nmi_full_training = full.metrics->nmi;
  }

  const std::uint64_t subset_master = derive_stream(config.seed, kStreamSubsets);
  for (int rep = 0; rep < repeats; ++rep) {
    const std::uint64_t rep_seed =
        derive_stream(subset_master, static_cast<std::uint64_t>(rep));

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(rep_seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> subset(order.begin(), order.begin() + subset_size);
    std::sort(subset.begin(), subset.end());

    const DatasetBundle sub = subset_bundle(bundle, subset);
    PipelineConfig sub_config = config;
    sub_config.num_clusters = k;  // keep K fixed even if a class is undersampled
    sub_config.seed = rep_seed;

    const PipelineResult trained = run_pipeline(sub, sub_config);
    const std::vector<int> predicted =
        classify_all(trained.model, trained.embedding.cholesky_factor,
                     trained.partition.centers, bundle.features.matrix());
    report.nmi_per_repeat.push_back(nmi(predicted, *bundle.labels));
  }

  const double mean =
      std::accumulate(report.nmi_per_repeat.begin(), report.nmi_per_repeat.end(), 0.0) /
      static_cast<double>(repeats);
  double var = 0.0;
  for (double v : report.nmi_per_repeat) {
    var += (v - mean) * (v - mean);
  }
  report.nmi_mean = mean;
  report.nmi_stddev = repeats > 1 ? std::sqrt(var / (repeats - 1)) : 0.0;
  return report;
}

}  // namespace mlgc
