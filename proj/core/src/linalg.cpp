#include "blochhom/linalg.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace blochhom {

using MatrixXcld = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

EigenSystem hermitian_eigensystem(const Eigen::MatrixXcd& H) {
  MatrixXcld Hl = H.cast<std::complex<long double>>();
  Hl = ((Hl + Hl.adjoint()) * std::complex<long double>(0.5L)).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXcld> solver(Hl);
  EigenSystem es;
  es.values = solver.eigenvalues().cast<double>();
  es.vectors = solver.eigenvectors().cast<std::complex<double>>();
  return es;
}

double spectral_norm(const Eigen::MatrixXcd& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  // Fixed-seed start vector keeps the estimate identical across runs and
  // thread counts.
  std::mt19937 rng(0x5eedU);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(M.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::complex<double>(gauss(rng), gauss(rng));
  v.normalize();

  const int cap = 10 * static_cast<int>(std::max(M.rows(), M.cols()));
  double sigma = 0.0;
  for (int it = 0; it < cap; ++it) {
    Eigen::VectorXcd y = M * v;
    double s = y.norm();
    if (s == 0.0) return 0.0;
    Eigen::VectorXcd z = M.adjoint() * y;
    double zn = z.norm();
    if (zn == 0.0) return s;
    v = z / zn;
    double prev = sigma;
    sigma = std::sqrt(zn);  // ||M^*M v|| with ||v||=1 -> sigma_max^2 estimate
    if (it > 0 && std::abs(sigma - prev) <= 1e-10 * sigma) break;
  }
  return sigma;
}

Eigen::MatrixXcd unitary_phase(const EigenSystem& es, double tau) {
  Eigen::VectorXcd phases(es.values.size());
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    double theta = tau * es.values[j];
    phases[j] = std::complex<double>(std::cos(theta), -std::sin(theta));
  }
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

SlopeFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                          int tail, double floor) {
  SlopeFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (y[i] > floor && x[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.empty()) {
    fit.exact = true;
    return fit;
  }
  std::size_t first = 0;
  if (tail > 0 && lx.size() > static_cast<std::size_t>(tail)) first = lx.size() - tail;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = first; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    ++n;
  }
  fit.points_used = n;
  if (n < 2) {
    fit.exact = (n == 0);
    return fit;
  }
  double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = first; i < lx.size(); ++i) {
    double r = ly[i] - (fit.slope * lx[i] + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace blochhom
