#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mlgc {

// Joint count table of two labelings of the same N items; labels may be any
// non-negative ints and are compacted to dense ids per side.
struct ContingencyTable {
  Eigen::MatrixXi counts;  // rows: predicted clusters, cols: reference classes
  long long n = 0;

  static ContingencyTable from_assignments(const std::vector<int>& predicted,
                                           const std::vector<int>& reference);

  int num_predicted() const { return static_cast<int>(counts.rows()); }
  int num_reference() const { return static_cast<int>(counts.cols()); }
};

// Fraction of points whose cluster's majority class matches their own class.
double purity(const std::vector<int>& predicted, const std::vector<int>& reference);

// Normalized mutual information with arithmetic-mean normalization,
//   NMI = 2 I(P; R) / (H(P) + H(R)),
// natural logs.  Both partitions trivial (single cluster each) gives 1.
double nmi(const std::vector<int>& predicted, const std::vector<int>& reference);

// Adjusted Rand index (permutation-model chance correction).  When the
// chance-corrected denominator degenerates to zero the value is 1 if the
// partitions are identical up to relabeling and 0 otherwise.
double adjusted_rand(const std::vector<int>& predicted,
                     const std::vector<int>& reference);

struct MetricsReport {
  double purity = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  long long n = 0;
  int k_pred = 0;
  int k_true = 0;
};

MetricsReport evaluate_clustering(const std::vector<int>& predicted,
                                  const std::vector<int>& reference);

// Serialize a report as a single JSON object
// {"purity":..., "nmi":..., "ari":..., "n":..., "k_pred":..., "k_true":...}.
std::string to_json(const MetricsReport& report);

}  // namespace mlgc
