#ifndef BLOCHHOM_FIBER_HPP
#define BLOCHHOM_FIBER_HPP

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "blochhom/cell_problem.hpp"
#include "blochhom/coefficient.hpp"
#include "blochhom/lattice.hpp"
#include "blochhom/linalg.hpp"
#include "blochhom/symbol.hpp"

namespace blochhom {

// Window constants for the threshold regime near the bottom of the spectrum
// of the unperturbed fiber: the spectral interval [0, delta] is separated
// from the rest by construction, and |k| <= t0 keeps exactly n eigenvalues
// inside it.  The unspecified dimensional factor in c0 is set by cdp_factor
// (default 1); rates, not constants, are the testable content, and the
// rank-n check in threshold_projection guards the heuristic.
struct ThresholdWindow {
  double delta = 0.0;
  double t0 = 0.0;
  double alpha0 = 0.0, alpha1 = 0.0;
  double g_sup = 0.0, ginv_sup = 0.0;
  double r0 = 0.0;
  double cdp_factor = 1.0;
  double c0 = 0.0, c1 = 0.0, ct = 0.0;
  double d0_lower = 0.0;  // lower bound for the spectral gap of the k=0 fiber
  int order_p = 0;
};

ThresholdWindow make_threshold_window(const Lattice& lat, const Symbol& b,
                                      const PeriodicCoefficient& g, double cdp_factor = 1.0);

// Dense Hermitian Galerkin matrix of the fiber operator at quasimomentum k,
// with block entries b(b_i + k)^* ghat(b_i - b_j) b(b_j + k) on the truncated
// plane-wave basis.  The eigendecomposition is computed on demand and cached;
// instances are not safe to share across threads until it has been computed.
class FiberOperator {
 public:
  FiberOperator(Eigen::VectorXd k, FrequencySet freqs, int n, int p, Eigen::MatrixXcd matrix);

  const Eigen::VectorXd& k() const { return k_; }
  const FrequencySet& freqs() const { return freqs_; }
  int block_size() const { return n_; }
  int order() const { return p_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const EigenSystem& eigensystem() const;

 private:
  Eigen::VectorXd k_;
  FrequencySet freqs_;
  int n_, p_;
  Eigen::MatrixXcd matrix_;
  mutable std::optional<EigenSystem> eig_;
};

FiberOperator assemble_fiber(const Lattice& lat, const Symbol& b, const PeriodicCoefficient& g,
                             const FrequencySet& freqs, const Eigen::VectorXd& k);

// Block-diagonal fiber of the effective operator: n x n blocks
// b(b + k)^* g0 b(b + k) per frequency.
class EffectiveFiber {
 public:
  EffectiveFiber(Eigen::VectorXd k, FrequencySet freqs, int n, int p,
                 std::vector<Eigen::MatrixXcd> blocks);

  const Eigen::VectorXd& k() const { return k_; }
  const FrequencySet& freqs() const { return freqs_; }
  int block_size() const { return n_; }
  int order() const { return p_; }
  const std::vector<Eigen::MatrixXcd>& blocks() const { return blocks_; }
  Eigen::MatrixXcd dense() const;
  const EigenSystem& eigensystem() const;  // blockwise solve, then globally sorted

 private:
  Eigen::VectorXd k_;
  FrequencySet freqs_;
  int n_, p_;
  std::vector<Eigen::MatrixXcd> blocks_;
  mutable std::optional<EigenSystem> eig_;
};

EffectiveFiber assemble_effective_fiber(const EffectiveData& eff, const Symbol& b,
                                        const Lattice& lat, const FrequencySet& freqs,
                                        const Eigen::VectorXd& k);

// Diagonal smoothing factor: entries eps^s (|b+k|^2 + eps^2)^{-s/2}, repeated
// n times per frequency, all in (0, 1].
struct SmoothingOperator {
  Eigen::VectorXd k;
  double eps = 0.0;
  double s = 0.0;
  Eigen::VectorXd diagonal;
};

SmoothingOperator make_smoothing(const FrequencySet& freqs, const Eigen::VectorXd& k,
                                 double eps, double s, int n);

// exp(-i tau F) for either fiber, through the cached eigendecomposition.
Eigen::MatrixXcd fiber_exponential(const FiberOperator& f, double tau);
Eigen::MatrixXcd fiber_exponential(const EffectiveFiber& f, double tau);

// || (e^{-i tau eps^{-2p} A(k)} - e^{-i tau eps^{-2p} A0(k)}) R0(k,eps)^{s/2} ||,
// the per-fiber smoothed propagator distance.  tau is physical time; the
// eps^{-2p} scaling is applied internally.
double smoothed_error_norm(const FiberOperator& fiber, const EffectiveFiber& efiber,
                           double tau, double eps, double s);

// Orthogonal projection onto the zero-frequency constants (the kernel of the
// k=0 fiber), as a matrix on the truncated basis.
Eigen::MatrixXcd kernel_projection(const FrequencySet& freqs, int n);

// Spectral projection of the fiber onto [0, delta].  Requires |k| <= t0,
// exactly n eigenvalues in the window and none in (delta, 3 delta).
std::pair<Eigen::MatrixXcd, int> threshold_projection(const FiberOperator& fiber,
                                                      const ThresholdWindow& window);

// Threshold sweep along k = t * theta over a geometric t-ladder: projection
// distances ||F(t) - P||, residuals of the expansion
//   A(k) F(t) = t^{2p} S(theta) P + t^{2p+1} G(theta) + O(t^{2p+2}),
// and the eigenvalue ratios lambda_j(t)/t^{2p} against the germ eigenvalues.
// The cell problem is solved on the fiber frequency set itself so the
// compared quantities describe the same truncated family.
struct ThresholdSweep {
  Eigen::VectorXd theta;
  std::vector<double> t;
  std::vector<double> projection_gap;
  std::vector<double> residual_with_correction;
  std::vector<double> residual_without_correction;
  std::vector<Eigen::VectorXd> eigenvalue_ratios;  // lambda_j(t)/t^{2p}, ascending
  Eigen::VectorXd germ_eigenvalues;                // eigenvalues of S(theta), ascending
  Eigen::VectorXd germ_extrapolated;               // Richardson limit of the ratios
  double correction_norm = 0.0;                    // ||G(theta)||
  double germ_norm = 0.0;                          // ||S(theta)||
  SlopeFit projection_slope;
  SlopeFit residual_slope_with;
  SlopeFit residual_slope_without;
};

ThresholdSweep threshold_residual_sweep(const Lattice& lat, const Symbol& b,
                                        const PeriodicCoefficient& g, const FrequencySet& freqs,
                                        const ThresholdWindow& window,
                                        const Eigen::VectorXd& theta,
                                        const std::vector<double>& t_ladder);

}  // namespace blochhom

#endif
