#include "blochhom/coefficient.hpp"

#include <algorithm>
#include <cmath>

namespace blochhom {

namespace {
bool lex_less_coords(const CoefficientTerm& a, const CoefficientTerm& b) {
  for (int i = 0; i < 3; ++i) {
    if (a.coords[i] != b.coords[i]) return a.coords[i] < b.coords[i];
  }
  return false;
}
}  // namespace

PeriodicCoefficient::PeriodicCoefficient(const Lattice& lat, std::vector<CoefficientTerm> terms)
    : lattice_(lat), terms_(std::move(terms)) {
  if (terms_.empty()) throw ConfigInvalid("coefficient needs at least one Fourier term");
  m_ = static_cast<int>(terms_.front().matrix.rows());
  for (const auto& t : terms_) {
    if (t.matrix.rows() != m_ || t.matrix.cols() != m_)
      throw ConfigInvalid("coefficient Fourier terms must all be m x m");
  }
  std::sort(terms_.begin(), terms_.end(), lex_less_coords);
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    if (terms_[i].coords == terms_[i - 1].coords)
      throw ConfigInvalid("duplicate coefficient Fourier coordinate");
  }
  // ghat(-c) = ghat(c)^* term by term.
  for (const auto& t : terms_) {
    Eigen::MatrixXcd mirror = fourier(-t.coords);
    if ((mirror - t.matrix.adjoint()).norm() > 1e-12 * (1.0 + t.matrix.norm()))
      throw ConfigInvalid("coefficient violates ghat(-c) = ghat(c)^*; g(x) would not be Hermitian");
  }
}

Eigen::MatrixXcd PeriodicCoefficient::fourier(const Eigen::Vector3i& coords) const {
  CoefficientTerm probe;
  probe.coords = coords;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), probe, lex_less_coords);
  if (it != terms_.end() && it->coords == coords) return it->matrix;
  return Eigen::MatrixXcd::Zero(m_, m_);
}

Eigen::MatrixXcd PeriodicCoefficient::eval(const Eigen::VectorXd& x) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m_, m_);
  for (const auto& t : terms_) {
    double phase = lattice_.dual_vector(t.coords).dot(x);
    out += t.matrix * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return out;
}

double PeriodicCoefficient::max_frequency() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, lattice_.dual_vector(t.coords).norm());
  return m;
}

PositivityCertificate validate_coefficient(const PeriodicCoefficient& g, int grid_res) {
  if (grid_res < 8) throw ConfigInvalid("validation grid must have >= 8 points per dimension");
  const Lattice& lat = g.lattice();
  const int d = lat.dim;
  long total = 1;
  for (int j = 0; j < d; ++j) total *= grid_res;

  PositivityCertificate cert;
  cert.grid_resolution = grid_res;
  cert.min_eigenvalue = std::numeric_limits<double>::infinity();
  cert.max_eigenvalue = -std::numeric_limits<double>::infinity();
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    for (int j = d - 1; j >= 0; --j) {
      x += (static_cast<double>(rem % grid_res) / grid_res) * lat.primal.col(j);
      rem /= grid_res;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.eval(x));
    cert.min_eigenvalue = std::min(cert.min_eigenvalue, es.eigenvalues().minCoeff());
    cert.max_eigenvalue = std::max(cert.max_eigenvalue, es.eigenvalues().maxCoeff());
  }
  if (!(cert.min_eigenvalue > 0.0)) {
    throw NotPositiveDefinite("coefficient g(x) is not positive definite on the validation grid");
  }
  return cert;
}

const PositivityCertificate& ensure_certificate(PeriodicCoefficient& g) {
  if (!g.certificate()) g.attach_certificate(validate_coefficient(g, 64));
  return *g.certificate();
}

}  // namespace blochhom
