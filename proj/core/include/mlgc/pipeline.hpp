#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mlgc/aggregate.hpp"
#include "mlgc/cluster.hpp"
#include "mlgc/data_io.hpp"
#include "mlgc/embed.hpp"
#include "mlgc/metrics.hpp"

namespace mlgc {

// End-to-end configuration: aggregate the layers, train the embedder on the
// aggregated Laplacian, k-means the whitened embedding.  `seed` drives the
// model initialization and the k-means restarts through independent streams;
// two runs with equal config and data produce identical results.
struct PipelineConfig {
  int num_clusters = 0;  // 0: take k_true from the dataset labels
  AggregationMethod method = AggregationMethod::geometric;
  AggregationConfig aggregation;
  TrainConfig training;
  int kmeans_restarts = 10;
  std::vector<int> hidden_sizes = {400, 200, 100};
  std::uint64_t seed = 0;
};

struct PipelineResult {
  SpdMatrix aggregated;
  EmbedderModel model;
  EmbeddingResult embedding;
  Partition partition;
  std::optional<MetricsReport> metrics;  // present when the bundle has labels
};

PipelineResult run_pipeline(const DatasetBundle& bundle, const PipelineConfig& config,
                            const std::function<void(int, double)>& progress = {});

// Hold-out generalization probe: train the full pipeline on `repeats` random
// subsets of the nodes (fraction `train_fraction` each), then classify every
// node of the full dataset with the subset-trained model and score NMI
// against the ground truth.  Requires labels.
struct GeneralizationReport {
  double train_fraction = 0.0;
  double nmi_full_training = 0.0;     // pipeline trained on 100% of the nodes
  std::vector<double> nmi_per_repeat; // subset-trained, scored on all nodes
  double nmi_mean = 0.0;
  double nmi_stddev = 0.0;            // sample standard deviation
};

GeneralizationReport run_generalization(const DatasetBundle& bundle,
                                        const PipelineConfig& config,
                                        double train_fraction, int repeats);

}  // namespace mlgc
