#include "mlgc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mlgc/errors.hpp"

namespace mlgc {

namespace {

std::map<int, int> dense_ids(const std::vector<int>& labels, const char* side) {
  std::map<int, int> ids;
  for (int v : labels) {
    if (v < 0) {
      std::ostringstream msg;
      msg << "metrics: negative " << side << " label " << v;
      throw ArgumentError(msg.str());
    }
    ids.emplace(v, 0);
  }
  int next = 0;
  for (auto& [label, id] : ids) {
    (void)label;
    id = next++;
  }
  return ids;
}

long long pairs2(long long c) { return c * (c - 1) / 2; }

}  // namespace

ContingencyTable ContingencyTable::from_assignments(
    const std::vector<int>& predicted, const std::vector<int>& reference) {
  if (predicted.empty()) {
    throw ArgumentError("metrics: empty assignments");
  }
  if (predicted.size() != reference.size()) {
    std::ostringstream msg;
    msg << "metrics: " << predicted.size() << " predicted vs "
        << reference.size() << " reference labels";
    throw ArgumentError(msg.str());
  }

  const auto pred_ids = dense_ids(predicted, "predicted");
  const auto ref_ids = dense_ids(reference, "reference");

  ContingencyTable table;
  table.n = static_cast<long long>(predicted.size());
  table.counts = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(pred_ids.size()),
                                       static_cast<Eigen::Index>(ref_ids.size()));
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    ++table.counts(pred_ids.at(predicted[i]), ref_ids.at(reference[i]));
  }
  return table;
}

double purity(const std::vector<int>& predicted, const std::vector<int>& reference) {
  const ContingencyTable table =
      ContingencyTable::from_assignments(predicted, reference);
  long long majority_sum = 0;
  for (Eigen::Index c = 0; c < table.counts.rows(); ++c) {
    majority_sum += table.counts.row(c).maxCoeff();
  }
  return static_cast<double>(majority_sum) / static_cast<double>(table.n);
}

double nmi(const std::vector<int>& predicted, const std::vector<int>& reference) {
  const ContingencyTable table =
      ContingencyTable::from_assignments(predicted, reference);
  const double n = static_cast<double>(table.n);
  const Eigen::VectorXi row_sums = table.counts.rowwise().sum();
  const Eigen::VectorXi col_sums = table.counts.colwise().sum();

  double mutual = 0.0;
  for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
      const double nij = table.counts(i, j);
      if (nij == 0.0) continue;
      mutual += (nij / n) *
                std::log(nij * n /
                         (static_cast<double>(row_sums[i]) * col_sums[j]));
    }
  }

  auto entropy = [n](const Eigen::VectorXi& sums) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < sums.size(); ++i) {
      if (sums[i] == 0) continue;
      const double p = sums[i] / n;
      h -= p * std::log(p);
    }
    return h;
  };
  const double h_pred = entropy(row_sums);
  const double h_ref = entropy(col_sums);

  // Both partitions trivial: identical by definition, so score 1.
  if (h_pred + h_ref == 0.0) return 1.0;
  return 2.0 * mutual / (h_pred + h_ref);
}

double adjusted_rand(const std::vector<int>& predicted,
                     const std::vector<int>& reference) {
  const ContingencyTable table =
      ContingencyTable::from_assignments(predicted, reference);

  long long index = 0;
  for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
      index += pairs2(table.counts(i, j));
    }
  }
  long long sum_rows = 0;
  for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
    sum_rows += pairs2(table.counts.row(i).sum());
  }
  long long sum_cols = 0;
  for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
    sum_cols += pairs2(table.counts.col(j).sum());
  }
  const double total_pairs = static_cast<double>(pairs2(table.n));
  const double expected =
      total_pairs > 0.0
          ? static_cast<double>(sum_rows) * static_cast<double>(sum_cols) /
                total_pairs
          : 0.0;
  const double max_index = 0.5 * static_cast<double>(sum_rows + sum_cols);

  if (max_index == expected) {
    // Degenerate chance model (e.g. all singletons or one big cluster on
    // both sides): 1 for identical partitions, 0 otherwise.
    bool identical = true;
    for (Eigen::Index i = 0; i < table.counts.rows() && identical; ++i) {
      int nonzero = 0;
      for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
        if (table.counts(i, j) != 0) ++nonzero;
      }
      if (nonzero > 1) identical = false;
    }
    for (Eigen::Index j = 0; j < table.counts.cols() && identical; ++j) {
      int nonzero = 0;
      for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
        if (table.counts(i, j) != 0) ++nonzero;
      }
      if (nonzero > 1) identical = false;
    }
    return identical ? 1.0 : 0.0;
  }
  return (static_cast<double>(index) - expected) / (max_index - expected);
}

MetricsReport evaluate_clustering(const std::vector<int>& predicted,
                                  const std::vector<int>& reference) {
  const ContingencyTable table =
      ContingencyTable::from_assignments(predicted, reference);
  MetricsReport report;
  report.purity = purity(predicted, reference);
  report.nmi = nmi(predicted, reference);
  report.ari = adjusted_rand(predicted, reference);
  report.n = table.n;
  report.k_pred = table.num_predicted();
  report.k_true = table.num_reference();
  return report;
}

std::string to_json(const MetricsReport& report) {
  nlohmann::json j;
  j["purity"] = report.purity;
  j["nmi"] = report.nmi;
  j["ari"] = report.ari;
  j["n"] = report.n;
  j["k_pred"] = report.k_pred;
  j["k_true"] = report.k_true;
  return j.dump(2);
}

}  // namespace mlgc
