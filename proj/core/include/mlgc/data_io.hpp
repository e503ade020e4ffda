#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mlgc/graph.hpp"

namespace mlgc {

// Recipe for a synthetic multilayer benchmark.  Each layer draws K cluster
// means on a circle (random per-layer orientation) such that adjacent means
// sit `separation * noise_sigma` apart, adds isotropic Gaussian noise, and
// connects the points with a symmetrized k-NN graph.  Node features are the
// concatenated per-layer coordinates.  All randomness derives from `seed`
// via independent streams (stream 0: label shuffle, stream 1+s: layer s).
struct SyntheticSpec {
  int num_points = 200;
  int num_clusters = 3;
  int num_layers = 2;
  int layer_dim = 5;       // coordinates per layer; feature dim = num_layers * layer_dim
  int knn_k = 20;
  double separation = 2.5; // adjacent-mean distance in units of noise_sigma
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;
};

// A dataset: graph + node features, with ground-truth labels when known.
struct DatasetBundle {
  MultilayerGraph graph;
  FeatureMatrix features;
  std::optional<std::vector<int>> labels;
};

DatasetBundle generate_synthetic(const SyntheticSpec& spec);

// Restrict a bundle to the given node indices (order preserved).
DatasetBundle subset_bundle(const DatasetBundle& bundle,
                            const std::vector<int>& indices);

// On-disk layout of a bundle directory:
//   manifest.json   {"version":1,"n":...,"m":...,"s":...,"has_labels":...,
//                    "k_true":...}            (k_true only with labels)
//   layer_<s>.tsv   one undirected edge per line: "i<TAB>j<TAB>weight",
//                   0-based, each pair once (written with i < j)
//   features.csv    n rows of m comma-separated values
//   labels.csv      one non-negative integer per line (only with labels)
void save_bundle(const DatasetBundle& bundle, const std::string& directory);
DatasetBundle load_bundle(const std::string& directory);

// Individual formats, usable on their own.  All throw IoError with the file
// name and line number on malformed input.
Eigen::MatrixXd load_edge_list(const std::string& path, int num_vertices);
void save_edge_list(const Eigen::MatrixXd& adjacency, const std::string& path);

Eigen::MatrixXd load_matrix_csv(const std::string& path);
void save_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);

std::vector<int> load_labels(const std::string& path);
void save_labels(const std::vector<int>& labels, const std::string& path);

// Cluster assignment CSV with header: "node_index,cluster_id", rows in node
// order.  load_assignments also accepts the bare one-label-per-line format,
// so ground-truth label files and partition files feed the same readers.
void save_partition_csv(const std::vector<int>& assignments, const std::string& path);
std::vector<int> load_assignments(const std::string& path);

}  // namespace mlgc
