#ifndef BLOCHHOM_COEFFICIENT_HPP
#define BLOCHHOM_COEFFICIENT_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "blochhom/lattice.hpp"

namespace blochhom {

struct CoefficientTerm {
  Eigen::Vector3i coords;   // dual-lattice integer coordinates
  Eigen::MatrixXcd matrix;  // m x m Fourier coefficient
};

struct PositivityCertificate {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  int grid_resolution = 0;
  double sup_norm() const { return max_eigenvalue; }          // ~ ||g||_inf
  double inv_sup_norm() const { return 1.0 / min_eigenvalue; }  // ~ ||g^{-1}||_inf
};

// Periodic Hermitian matrix coefficient g(x) given as a finite Fourier series
// over the dual lattice.  The stored terms must satisfy ghat(-c) = ghat(c)^*
// so that g(x) is pointwise Hermitian; the constructor enforces this.
class PeriodicCoefficient {
 public:
  PeriodicCoefficient(const Lattice& lat, std::vector<CoefficientTerm> terms);

  int rows() const { return m_; }
  const Lattice& lattice() const { return lattice_; }
  const std::vector<CoefficientTerm>& terms() const { return terms_; }

  // ghat(c); zero matrix if the coordinate is not stored.
  Eigen::MatrixXcd fourier(const Eigen::Vector3i& coords) const;

  // g(x) = sum ghat(c) exp(i <b_c, x>); Hermitian by construction.
  Eigen::MatrixXcd eval(const Eigen::VectorXd& x) const;

  // Largest |b_c| over stored terms (K_g).
  double max_frequency() const;

  const std::optional<PositivityCertificate>& certificate() const { return certificate_; }
  void attach_certificate(const PositivityCertificate& cert) { certificate_ = cert; }

 private:
  Lattice lattice_;
  int m_ = 0;
  std::vector<CoefficientTerm> terms_;  // lex sorted on coords
  std::optional<PositivityCertificate> certificate_;
};

// Min/max eigenvalues of g over a uniform grid (grid_res points per
// dimension).  Throws NotPositiveDefinite if the minimum is <= 0.
PositivityCertificate validate_coefficient(const PeriodicCoefficient& g, int grid_res);

// Validates (resolution 64) and caches the certificate if not yet present.
const PositivityCertificate& ensure_certificate(PeriodicCoefficient& g);

}  // namespace blochhom

#endif
