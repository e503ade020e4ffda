#pragma once

#include <Eigen/Dense>

namespace mlgc {

// Eigendecomposition of a real symmetric matrix.
// eigenvalues are sorted ascending; eigenvectors holds the matching
// orthonormal eigenvectors as columns, so  A = V diag(w) V^T.
struct SymEig {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

// Full symmetric eigendecomposition (LAPACK dsyevd under the hood).
// The input is symmetrized as (A + A^T)/2 before factorization, so mild
// floating-point asymmetry is tolerated.  Throws ArgumentError for empty or
// non-square input, NumericalError if the solver fails to converge.
SymEig sym_eig(const Eigen::MatrixXd& a);

// A symmetric positive definite matrix, certified at construction.
// Construction symmetrizes the input and verifies positive definiteness via
// a Cholesky factorization; it throws NumericalError when the matrix is not
// SPD and ArgumentError for empty/non-square/non-finite input.  Instances
// are immutable, so holding an SpdMatrix is proof of definiteness.
class SpdMatrix {
 public:
  explicit SpdMatrix(Eigen::MatrixXd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& matrix() const { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

// Principal matrix logarithm: V diag(log w) V^T.  Always symmetric.
Eigen::MatrixXd spd_log(const SpdMatrix& a);

// Matrix exponential of a symmetric matrix: V diag(exp w) V^T.  The result
// is SPD by construction.  Throws NumericalError if exp would overflow
// (largest eigenvalue > ~709).
SpdMatrix spd_exp(const Eigen::MatrixXd& sym);

// Principal square root A^{1/2}, and A^{1/2} together with A^{-1/2} from a
// single eigendecomposition.
SpdMatrix spd_sqrt(const SpdMatrix& a);

struct SqrtPair {
  SpdMatrix sqrt;
  SpdMatrix inv_sqrt;
};
SqrtPair spd_sqrt_pair(const SpdMatrix& a);

// Squared affine-invariant Riemannian distance on the SPD manifold:
//   || Log(A^{-1/2} B A^{-1/2}) ||_F^2 .
// Symmetric in its arguments and invariant under congruence A -> M A M^T.
double riemann_dist(const SpdMatrix& a, const SpdMatrix& b);

}  // namespace mlgc
