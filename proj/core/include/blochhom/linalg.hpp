#ifndef BLOCHHOM_LINALG_HPP
#define BLOCHHOM_LINALG_HPP

#include <Eigen/Dense>
#include <vector>

namespace blochhom {

// Eigendecomposition of a Hermitian matrix, eigenvalues ascending and
// eigenvectors orthonormal.  The solve runs in extended (long double)
// precision so that small eigenvalues carry an absolute error of order
// eps_ld * ||H|| instead of the double-precision floor; that matters when
// eigenvalues near zero get multiplied by large time factors downstream.
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  int size() const { return static_cast<int>(values.size()); }
};

EigenSystem hermitian_eigensystem(const Eigen::MatrixXcd& H);

// Largest singular value by power iteration on M^*M.  Deterministic start
// vector; relative tolerance 1e-10; hard cap of 10 * max(rows, cols) sweeps.
double spectral_norm(const Eigen::MatrixXcd& M);

// exp(-i tau H) from a cached eigendecomposition: V diag(e^{-i tau lambda}) V^*.
Eigen::MatrixXcd unitary_phase(const EigenSystem& es, double tau);

// Least-squares slope of log(y) against log(x) over the last `tail` points
// (tail <= 0 means all points).  Points with y <= floor are dropped first.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS residual of the fit in log space
  int points_used = 0;
  bool exact = false;  // all data at/below the floor: nothing to fit
};

SlopeFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                          int tail = 0, double floor = 1e-13);

}  // namespace blochhom

#endif
