#include "mlgc/spd.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include <lapacke.h>

#include "mlgc/errors.hpp"

namespace mlgc {

namespace {

void require_square(const Eigen::MatrixXd& a, const char* who) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw ArgumentError(std::string(who) + ": matrix is empty");
  }
  if (a.rows() != a.cols()) {
    std::ostringstream msg;
    msg << who << ": matrix must be square, got " << a.rows() << "x" << a.cols();
    throw ArgumentError(msg.str());
  }
}

// Rebuild V f(w) V^T from a decomposition, mapping each eigenvalue through f.
template <typename Fn>
Eigen::MatrixXd spectral_map(const SymEig& eig, Fn f) {
  Eigen::VectorXd mapped(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) {
    mapped[i] = f(eig.eigenvalues[i]);
  }
  return eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.transpose();
}

}  // namespace

SymEig sym_eig(const Eigen::MatrixXd& a) {
  require_square(a, "sym_eig");
  const lapack_int n = static_cast<lapack_int>(a.rows());

  SymEig out;
  out.eigenvectors = 0.5 * (a + a.transpose());
  out.eigenvalues.resize(n);

  // dsyevd: divide-and-conquer symmetric eigensolver, vectors in place.
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                         out.eigenvectors.data(), n,
                                         out.eigenvalues.data());
  if (info != 0) {
    std::ostringstream msg;
    msg << "sym_eig: dsyevd failed with info=" << info << " (dim=" << n
        << ", |A|_F=" << a.norm() << ", diag range=[" << a.diagonal().minCoeff()
        << ", " << a.diagonal().maxCoeff() << "])";
    throw NumericalError(msg.str());
  }
  return out;
}

SpdMatrix::SpdMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  require_square(entries_, "SpdMatrix");
  if (!entries_.allFinite()) {
    throw ArgumentError("SpdMatrix: matrix has non-finite entries");
  }
  entries_ = 0.5 * (entries_ + entries_.transpose()).eval();

  Eigen::LLT<Eigen::MatrixXd> llt(entries_);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "SpdMatrix: matrix of dim " << entries_.rows()
        << " is not positive definite (Cholesky failed; trace="
        << entries_.trace() << ", min diag=" << entries_.diagonal().minCoeff()
        << ")";
    throw NumericalError(msg.str());
  }
}

Eigen::MatrixXd spd_log(const SpdMatrix& a) {
  const SymEig eig = sym_eig(a.matrix());
  if (eig.eigenvalues.minCoeff() <= 0.0) {
    std::ostringstream msg;
    msg << "spd_log: matrix has non-positive eigenvalue "
        << eig.eigenvalues.minCoeff();
    throw NumericalError(msg.str());
  }
  Eigen::MatrixXd result = spectral_map(eig, [](double w) { return std::log(w); });
  return 0.5 * (result + result.transpose()).eval();
}

SpdMatrix spd_exp(const Eigen::MatrixXd& sym) {
  const SymEig eig = sym_eig(sym);
  // exp(710) overflows double; fail loudly instead of returning inf.
  if (eig.eigenvalues.maxCoeff() > 709.0) {
    std::ostringstream msg;
    msg << "spd_exp: eigenvalue " << eig.eigenvalues.maxCoeff()
        << " would overflow exp()";
    throw NumericalError(msg.str());
  }
  return SpdMatrix(spectral_map(eig, [](double w) { return std::exp(w); }));
}

SpdMatrix spd_sqrt(const SpdMatrix& a) {
  return spd_sqrt_pair(a).sqrt;
}

SqrtPair spd_sqrt_pair(const SpdMatrix& a) {
  const SymEig eig = sym_eig(a.matrix());
  if (eig.eigenvalues.minCoeff() <= 0.0) {
    std::ostringstream msg;
    msg << "spd_sqrt: matrix has non-positive eigenvalue "
        << eig.eigenvalues.minCoeff();
    throw NumericalError(msg.str());
  }
  return SqrtPair{
      SpdMatrix(spectral_map(eig, [](double w) { return std::sqrt(w); })),
      SpdMatrix(spectral_map(eig, [](double w) { return 1.0 / std::sqrt(w); }))};
}

double riemann_dist(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << "riemann_dist: dimension mismatch " << a.dim() << " vs " << b.dim();
    throw ArgumentError(msg.str());
  }
  const Eigen::MatrixXd inv_sqrt = spd_sqrt_pair(a).inv_sqrt.matrix();
  const Eigen::MatrixXd inner = inv_sqrt * b.matrix() * inv_sqrt;
  return spd_log(SpdMatrix(inner)).squaredNorm();
}

}  // namespace mlgc
