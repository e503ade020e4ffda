#include "mlgc/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "mlgc/errors.hpp"
#include "mlgc/rng.hpp"

namespace mlgc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Shortest representation that round-trips exactly.
void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

[[noreturn]] void parse_fail(const std::string& path, long long line,
                             const std::string& what) {
  std::ostringstream msg;
  msg << path << ":" << line << ": " << what;
  throw IoError(msg.str());
}

std::string_view trim(std::string_view sv) {
  while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ' || sv.back() == '\t')) {
    sv.remove_suffix(1);
  }
  while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) {
    sv.remove_prefix(1);
  }
  return sv;
}

double parse_double(std::string_view sv, const std::string& path, long long line) {
  sv = trim(sv);
  double v = 0.0;
  const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size() || sv.empty()) {
    parse_fail(path, line, "expected a number, got '" + std::string(sv) + "'");
  }
  return v;
}

long long parse_int(std::string_view sv, const std::string& path, long long line) {
  sv = trim(sv);
  long long v = 0;
  const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size() || sv.empty()) {
    parse_fail(path, line, "expected an integer, got '" + std::string(sv) + "'");
  }
  return v;
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  return in;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw IoError("write to '" + path + "' failed");
  }
}

std::vector<std::string_view> split(std::string_view sv, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = sv.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(sv.substr(start));
      return fields;
    }
    fields.push_back(sv.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

DatasetBundle generate_synthetic(const SyntheticSpec& spec) {
  if (spec.num_clusters < 1) {
    throw ArgumentError("generate_synthetic: num_clusters must be >= 1");
  }
  if (spec.num_points < spec.num_clusters) {
    throw ArgumentError("generate_synthetic: need at least one point per cluster");
  }
  if (spec.num_layers < 1) {
    throw ArgumentError("generate_synthetic: num_layers must be >= 1");
  }
  if (spec.layer_dim < 2) {
    throw ArgumentError("generate_synthetic: layer_dim must be >= 2 (means live on a circle)");
  }
  if (spec.knn_k < 1 || spec.knn_k >= spec.num_points) {
    throw ArgumentError("generate_synthetic: knn_k must satisfy 1 <= k < num_points");
  }
  if (!(spec.noise_sigma > 0.0) || spec.separation < 0.0) {
    throw ArgumentError("generate_synthetic: noise_sigma must be > 0 and separation >= 0");
  }

  const int n = spec.num_points;
  const int k = spec.num_clusters;
  const int d = spec.layer_dim;

  // Balanced labels, shuffled on their own stream.
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    labels[static_cast<std::size_t>(i)] = i % k;
  }
  std::mt19937_64 label_rng(derive_stream(spec.seed, 0));
  std::shuffle(labels.begin(), labels.end(), label_rng);

  // Adjacent means on a circle of radius r are 2 r sin(pi/K) apart; choose r
  // so that distance equals separation * sigma.  K = 1 collapses to a point.
  const double radius =
      k > 1 ? spec.separation * spec.noise_sigma /
                  (2.0 * std::sin(std::numbers::pi / k))
            : 0.0;

  std::vector<Eigen::MatrixXd> layers;
  layers.reserve(static_cast<std::size_t>(spec.num_layers));
  Eigen::MatrixXd features(n, static_cast<Eigen::Index>(spec.num_layers) * d);

  for (int s = 0; s < spec.num_layers; ++s) {
    std::mt19937_64 rng(derive_stream(spec.seed, 1 + static_cast<std::uint64_t>(s)));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double offset = angle(rng);

    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(k, d);
    for (int c = 0; c < k; ++c) {
      const double theta = offset + 2.0 * std::numbers::pi * c / k;
      means(c, 0) = radius * std::cos(theta);
      means(c, 1) = radius * std::sin(theta);
    }

    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    Eigen::MatrixXd points(n, d);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) {
        points(i, j) = means(labels[static_cast<std::size_t>(i)], j) + noise(rng);
      }
    }

    features.middleCols(static_cast<Eigen::Index>(s) * d, d) = points;
    layers.push_back(knn_layer(points, spec.knn_k));
  }

  return DatasetBundle{MultilayerGraph(n, std::move(layers)),
                       FeatureMatrix(std::move(features)), std::move(labels)};
}

DatasetBundle subset_bundle(const DatasetBundle& bundle,
                            const std::vector<int>& indices) {
  MultilayerGraph graph = induced_subgraph(bundle.graph, indices);

  Eigen::MatrixXd feats(static_cast<Eigen::Index>(indices.size()),
                        bundle.features.dim());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    feats.row(static_cast<Eigen::Index>(r)) =
        bundle.features.matrix().row(indices[r]);
  }

  std::optional<std::vector<int>> labels;
  if (bundle.labels) {
    std::vector<int> sub;
    sub.reserve(indices.size());
    for (int i : indices) {
      sub.push_back((*bundle.labels)[static_cast<std::size_t>(i)]);
    }
    labels = std::move(sub);
  }
  return DatasetBundle{std::move(graph), FeatureMatrix(std::move(feats)),
                       std::move(labels)};
}

void save_edge_list(const Eigen::MatrixXd& adjacency, const std::string& path) {
  std::ofstream out = open_for_write(path);
  std::string buf;
  for (Eigen::Index i = 0; i < adjacency.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < adjacency.cols(); ++j) {
      if (adjacency(i, j) == 0.0) continue;
      buf.clear();
      buf += std::to_string(i);
      buf += '\t';
      buf += std::to_string(j);
      buf += '\t';
      append_double(buf, adjacency(i, j));
      buf += '\n';
      out << buf;
    }
  }
  finish_write(out, path);
}

Eigen::MatrixXd load_edge_list(const std::string& path, int num_vertices) {
  if (num_vertices <= 0) {
    throw ArgumentError("load_edge_list: num_vertices must be positive");
  }
  std::ifstream in = open_for_read(path);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(num_vertices, num_vertices);

  std::string line;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto fields = split(sv, '\t');
    if (fields.size() != 3) {
      parse_fail(path, lineno, "expected 'i<TAB>j<TAB>weight'");
    }
    const long long i = parse_int(fields[0], path, lineno);
    const long long j = parse_int(fields[1], path, lineno);
    const double weight = parse_double(fields[2], path, lineno);
    if (i < 0 || i >= num_vertices || j < 0 || j >= num_vertices) {
      parse_fail(path, lineno, "vertex index out of range");
    }
    if (i == j) {
      parse_fail(path, lineno, "self-loop");
    }
    if (!(weight > 0.0) || !std::isfinite(weight)) {
      parse_fail(path, lineno, "edge weight must be positive and finite");
    }
    if (w(i, j) != 0.0) {
      parse_fail(path, lineno, "duplicate edge (each undirected pair may appear once)");
    }
    w(i, j) = weight;
    w(j, i) = weight;
  }
  return w;
}

void save_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out = open_for_write(path);
  std::string buf;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    buf.clear();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) buf += ',';
      append_double(buf, m(i, j));
    }
    buf += '\n';
    out << buf;
  }
  finish_write(out, path);
}

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto fields = split(sv, ',');
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      row.push_back(parse_double(f, path, lineno));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      parse_fail(path, lineno, "inconsistent number of columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw IoError(path + ": no rows");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void save_labels(const std::vector<int>& labels, const std::string& path) {
  std::ofstream out = open_for_write(path);
  for (int v : labels) {
    out << v << '\n';
  }
  finish_write(out, path);
}

std::vector<int> load_labels(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::vector<int> labels;
  std::string line;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const long long v = parse_int(sv, path, lineno);
    if (v < 0) {
      parse_fail(path, lineno, "labels must be non-negative");
    }
    labels.push_back(static_cast<int>(v));
  }
  if (labels.empty()) {
    throw IoError(path + ": no labels");
  }
  return labels;
}

void save_partition_csv(const std::vector<int>& assignments, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "node_index,cluster_id\n";
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    out << i << ',' << assignments[i] << '\n';
  }
  finish_write(out, path);
}

std::vector<int> load_assignments(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::vector<int> out;
  std::string line;
  long long lineno = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = trim(line);
    if (sv.empty()) continue;
    const auto fields = split(sv, ',');
    if (first_content_line) {
      first_content_line = false;
      // A non-numeric first line is a header; skip it.
      long long probe = 0;
      const std::string_view f0 = trim(fields[0]);
      const auto res = std::from_chars(f0.data(), f0.data() + f0.size(), probe);
      if (res.ec != std::errc{} || res.ptr != f0.data() + f0.size()) {
        continue;
      }
    }
    if (fields.size() == 1) {
      // Bare label-per-line format.
      const long long v = parse_int(fields[0], path, lineno);
      if (v < 0) parse_fail(path, lineno, "cluster ids must be non-negative");
      out.push_back(static_cast<int>(v));
      continue;
    }
    // node_index,cluster_id rows must arrive in node order.
    const long long idx = parse_int(fields.front(), path, lineno);
    const long long v = parse_int(fields.back(), path, lineno);
    if (idx != static_cast<long long>(out.size())) {
      parse_fail(path, lineno, "node_index out of order");
    }
    if (v < 0) parse_fail(path, lineno, "cluster ids must be non-negative");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) {
    throw IoError(path + ": no assignments");
  }
  return out;
}

void save_bundle(const DatasetBundle& bundle, const std::string& directory) {
  if (bundle.features.num_nodes() != bundle.graph.num_vertices()) {
    throw ArgumentError("save_bundle: feature rows do not match graph vertices");
  }
  if (bundle.labels &&
      static_cast<int>(bundle.labels->size()) != bundle.graph.num_vertices()) {
    throw ArgumentError("save_bundle: label count does not match graph vertices");
  }

  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) {
    throw IoError("cannot create directory '" + directory + "': " + ec.message());
  }

  json manifest;
  manifest["version"] = 1;
  manifest["n"] = bundle.graph.num_vertices();
  manifest["m"] = bundle.features.dim();
  manifest["s"] = bundle.graph.num_layers();
  manifest["has_labels"] = bundle.labels.has_value();
  if (bundle.labels) {
    const int k_true =
        *std::max_element(bundle.labels->begin(), bundle.labels->end()) + 1;
    manifest["k_true"] = k_true;
  }
  {
    std::ofstream out = open_for_write((fs::path(directory) / "manifest.json").string());
    out << manifest.dump(2) << '\n';
    finish_write(out, (fs::path(directory) / "manifest.json").string());
  }

  for (int s = 0; s < bundle.graph.num_layers(); ++s) {
    const std::string name = "layer_" + std::to_string(s) + ".tsv";
    save_edge_list(bundle.graph.layer(s), (fs::path(directory) / name).string());
  }
  save_matrix_csv(bundle.features.matrix(),
                  (fs::path(directory) / "features.csv").string());
  if (bundle.labels) {
    save_labels(*bundle.labels, (fs::path(directory) / "labels.csv").string());
  }
}

DatasetBundle load_bundle(const std::string& directory) {
  const std::string manifest_path = (fs::path(directory) / "manifest.json").string();
  std::ifstream in = open_for_read(manifest_path);
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw IoError(manifest_path + ": invalid JSON: " + e.what());
  }

  int n = 0, m = 0, s = 0;
  bool has_labels = false;
  try {
    const int version = manifest.at("version").get<int>();
    if (version != 1) {
      throw IoError(manifest_path + ": unsupported version " + std::to_string(version));
    }
    n = manifest.at("n").get<int>();
    m = manifest.at("m").get<int>();
    s = manifest.at("s").get<int>();
    has_labels = manifest.at("has_labels").get<bool>();
  } catch (const json::exception& e) {
    throw IoError(manifest_path + ": missing fields: " + e.what());
  }
  if (n <= 0 || m <= 0 || s <= 0) {
    throw IoError(manifest_path + ": n, m and s must be positive");
  }

  std::vector<Eigen::MatrixXd> layers;
  layers.reserve(static_cast<std::size_t>(s));
  for (int layer = 0; layer < s; ++layer) {
    const std::string name = "layer_" + std::to_string(layer) + ".tsv";
    layers.push_back(load_edge_list((fs::path(directory) / name).string(), n));
  }

  Eigen::MatrixXd features =
      load_matrix_csv((fs::path(directory) / "features.csv").string());
  if (features.rows() != n || features.cols() != m) {
    std::ostringstream msg;
    msg << directory << "/features.csv: expected " << n << "x" << m << ", got "
        << features.rows() << "x" << features.cols();
    throw IoError(msg.str());
  }

  std::optional<std::vector<int>> labels;
  if (has_labels) {
    labels = load_labels((fs::path(directory) / "labels.csv").string());
    if (static_cast<int>(labels->size()) != n) {
      std::ostringstream msg;
      msg << directory << "/labels.csv: expected " << n << " labels, got "
          << labels->size();
      throw IoError(msg.str());
    }
  }

  return DatasetBundle{MultilayerGraph(n, std::move(layers)),
                       FeatureMatrix(std::move(features)), std::move(labels)};
}

}  // namespace mlgc
