#include "blochhom/fiber.hpp"

#include <algorithm>
#include <cmath>

namespace blochhom {

ThresholdWindow make_threshold_window(const Lattice& lat, const Symbol& b,
                                      const PeriodicCoefficient& g, double cdp_factor) {
  ThresholdWindow w;
  w.order_p = b.order();
  w.cdp_factor = cdp_factor;
  w.r0 = lat.inradius;

  EllipticityConstants ec = ellipticity_constants(b, 64 * b.dim());
  w.alpha0 = ec.alpha0;
  w.alpha1 = ec.alpha1;

  PositivityCertificate cert =
      g.certificate() ? *g.certificate() : validate_coefficient(g, 64);
  w.g_sup = cert.sup_norm();
  w.ginv_sup = cert.inv_sup_norm();

  const int p = w.order_p;
  w.d0_lower = w.alpha0 / w.ginv_sup * std::pow(2.0 * w.r0, 2 * p);
  w.delta = std::min(w.d0_lower / 36.0, 0.25);
  w.c0 = cdp_factor * std::sqrt(w.alpha1 / w.alpha0) * std::sqrt(w.g_sup * w.ginv_sup) *
         std::pow(1.0 + 1.0 / w.r0, p - 1);
  w.c1 = std::max((p - 1) * w.c0, std::sqrt(w.alpha1 * w.g_sup));
  // Any t0 below the bound is admissible; the cap keeps t0 <= 1/2 even for
  // user-supplied cdp_factor < 1.
  w.t0 = std::min(std::sqrt(w.delta) / w.c1, 0.5);
  w.ct = p * w.c0 * w.c0 + w.alpha1 * w.g_sup / w.delta;
  return w;
}

FiberOperator::FiberOperator(Eigen::VectorXd k, FrequencySet freqs, int n, int p,
                             Eigen::MatrixXcd matrix)
    : k_(std::move(k)), freqs_(std::move(freqs)), n_(n), p_(p), matrix_(std::move(matrix)) {}

const EigenSystem& FiberOperator::eigensystem() const {
  if (!eig_) {
    eig_ = hermitian_eigensystem(matrix_);
    double top = std::max(eig_->values.maxCoeff(), 0.0);
    if (eig_->values.minCoeff() < -1e-9 * std::max(top, 1e-300)) {
      throw Error("fiber operator is not positive semidefinite");
    }
  }
  return *eig_;
}

FiberOperator assemble_fiber(const Lattice& lat, const Symbol& b, const PeriodicCoefficient& g,
                             const FrequencySet& freqs, const Eigen::VectorXd& k) {
  const int n = b.cols();
  const int F = freqs.size();
  std::vector<Eigen::MatrixXcd> bsym(F);
  for (int i = 0; i < F; ++i) bsym[i] = b(freqs.vectors[i] + k);

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(F) * n,
                                              static_cast<Eigen::Index>(F) * n);
  for (int i = 0; i < F; ++i) {
    for (int j = 0; j < F; ++j) {
      Eigen::MatrixXcd gij = g.fourier(freqs.coords[i] - freqs.coords[j]);
      if (gij.isZero(0.0)) continue;
      A.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(j) * n, n, n) =
          bsym[i].adjoint() * gij * bsym[j];
    }
  }
  if ((A - A.adjoint()).norm() > 1e-12 * std::max(1.0, A.norm())) {
    throw Error("fiber matrix assembly lost Hermitian symmetry");
  }
  A = (0.5 * (A + A.adjoint())).eval();

  FiberOperator fiber(k, freqs, n, b.order(), std::move(A));

  if (k.norm() == 0.0) {
    // Structural check of the unperturbed fiber: an n-dimensional kernel
    // spanned by the zero-frequency constants, and a spectral gap at least
    // 90% of the ellipticity lower bound.
    ThresholdWindow w = make_threshold_window(lat, b, g);
    const EigenSystem& es = fiber.eigensystem();
    const int N = es.size();
    if (N <= n) throw TruncationTooSmall("fiber basis smaller than the kernel dimension");
    if (es.values[n - 1] > w.delta || es.values[n] < 0.9 * w.d0_lower) {
      throw TruncationTooSmall("k=0 fiber gap structure inconsistent with the ellipticity bound");
    }
    Eigen::MatrixXcd P = kernel_projection(freqs, n);
    for (int j = 0; j < n; ++j) {
      if ((P * es.vectors.col(j) - es.vectors.col(j)).norm() > 1e-8) {
        throw TruncationTooSmall("k=0 fiber kernel is not spanned by zero-frequency constants");
      }
    }
  }
  return fiber;
}

EffectiveFiber::EffectiveFiber(Eigen::VectorXd k, FrequencySet freqs, int n, int p,
                               std::vector<Eigen::MatrixXcd> blocks)
    : k_(std::move(k)), freqs_(std::move(freqs)), n_(n), p_(p), blocks_(std::move(blocks)) {}

Eigen::MatrixXcd EffectiveFiber::dense() const {
  const int F = freqs_.size();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(F) * n_,
                                              static_cast<Eigen::Index>(F) * n_);
  for (int i = 0; i < F; ++i) {
    A.block(static_cast<Eigen::Index>(i) * n_, static_cast<Eigen::Index>(i) * n_, n_, n_) =
        blocks_[i];
  }
  return A;
}

const EigenSystem& EffectiveFiber::eigensystem() const {
  if (!eig_) {
    const int F = freqs_.size();
    const Eigen::Index N = static_cast<Eigen::Index>(F) * n_;
    Eigen::VectorXd values(N);
    Eigen::MatrixXcd vectors = Eigen::MatrixXcd::Zero(N, N);
    for (int i = 0; i < F; ++i) {
      EigenSystem block = hermitian_eigensystem(blocks_[i]);
      values.segment(static_cast<Eigen::Index>(i) * n_, n_) = block.values;
      vectors.block(static_cast<Eigen::Index>(i) * n_, static_cast<Eigen::Index>(i) * n_, n_,
                    n_) = block.vectors;
    }
    // global ascending order
    std::vector<Eigen::Index> perm(N);
    for (Eigen::Index i = 0; i < N; ++i) perm[i] = i;
    std::stable_sort(perm.begin(), perm.end(),
                     [&](Eigen::Index a, Eigen::Index bidx) { return values[a] < values[bidx]; });
    EigenSystem es;
    es.values.resize(N);
    es.vectors.resize(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
      es.values[i] = values[perm[i]];
      es.vectors.col(i) = vectors.col(perm[i]);
    }
    eig_ = std::move(es);
  }
  return *eig_;
}

EffectiveFiber assemble_effective_fiber(const EffectiveData& eff, const Symbol& b,
                                        const Lattice& lat, const FrequencySet& freqs,
                                        const Eigen::VectorXd& k) {
  (void)lat;
  const int F = freqs.size();
  std::vector<Eigen::MatrixXcd> blocks(F);
  for (int i = 0; i < F; ++i) {
    Eigen::MatrixXcd bs = b(freqs.vectors[i] + k);
    Eigen::MatrixXcd blk = bs.adjoint() * eff.g0 * bs;
    blocks[i] = 0.5 * (blk + blk.adjoint());
  }
  return EffectiveFiber(k, freqs, b.cols(), b.order(), std::move(blocks));
}

SmoothingOperator make_smoothing(const FrequencySet& freqs, const Eigen::VectorXd& k,
                                 double eps, double s, int n) {
  SmoothingOperator sm;
  sm.k = k;
  sm.eps = eps;
  sm.s = s;
  const int F = freqs.size();
  sm.diagonal.resize(static_cast<Eigen::Index>(F) * n);
  for (int i = 0; i < F; ++i) {
    double q = (freqs.vectors[i] + k).squaredNorm() + eps * eps;
    double val = std::pow(eps * eps / q, 0.5 * s);
    for (int c = 0; c < n; ++c) sm.diagonal[static_cast<Eigen::Index>(i) * n + c] = val;
  }
  return sm;
}

Eigen::MatrixXcd fiber_exponential(const FiberOperator& f, double tau) {
  return unitary_phase(f.eigensystem(), tau);
}

Eigen::MatrixXcd fiber_exponential(const EffectiveFiber& f, double tau) {
  return unitary_phase(f.eigensystem(), tau);
}

double smoothed_error_norm(const FiberOperator& fiber, const EffectiveFiber& efiber,
                           double tau, double eps, double s) {
  const double tau_scaled = tau * std::pow(eps, -2.0 * fiber.order());
  Eigen::MatrixXcd U = fiber_exponential(fiber, tau_scaled);
  Eigen::MatrixXcd U0 = fiber_exponential(efiber, tau_scaled);
  SmoothingOperator sm = make_smoothing(fiber.freqs(), fiber.k(), eps, s, fiber.block_size());
  Eigen::MatrixXcd M = (U - U0) * sm.diagonal.asDiagonal();
  return spectral_norm(M);
}

Eigen::MatrixXcd kernel_projection(const FrequencySet& freqs, int n) {
  const Eigen::Index N = static_cast<Eigen::Index>(freqs.size()) * n;
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(N, N);
  int zero = freqs.zero_index();
  if (zero < 0) throw Error("frequency set misses the zero frequency");
  for (int c = 0; c < n; ++c) {
    Eigen::Index idx = static_cast<Eigen::Index>(zero) * n + c;
    P(idx, idx) = 1.0;
  }
  return P;
}

std::pair<Eigen::MatrixXcd, int> threshold_projection(const FiberOperator& fiber,
                                                      const ThresholdWindow& window) {
  if (fiber.k().norm() > window.t0 * (1.0 + 1e-12)) {
    throw Error("threshold projection requires |k| <= t0");
  }
  const EigenSystem& es = fiber.eigensystem();
  const int N = es.size();
  const int n = fiber.block_size();
  int rank = 0;
  for (int j = 0; j < N; ++j) {
    if (es.values[j] <= window.delta) ++rank;
  }
  if (rank != n) {
    throw RankMismatch("threshold window captured " + std::to_string(rank) +
                       " eigenvalues, expected " + std::to_string(n));
  }
  double slack = 1e-9 * window.delta;
  for (int j = 0; j < N; ++j) {
    if (es.values[j] > window.delta + slack && es.values[j] < 3.0 * window.delta - slack) {
      throw RankMismatch("spectrum intrudes into (delta, 3 delta); window constants too optimistic");
    }
  }
  Eigen::MatrixXcd F = es.vectors.leftCols(rank) * es.vectors.leftCols(rank).adjoint();
  return {F, rank};
}

ThresholdSweep threshold_residual_sweep(const Lattice& lat, const Symbol& b,
                                        const PeriodicCoefficient& g, const FrequencySet& freqs,
                                        const ThresholdWindow& window,
                                        const Eigen::VectorXd& theta,
                                        const std::vector<double>& t_ladder) {
  const int n = b.cols();
  const int p = b.order();

  // Cell data on the fiber frequency set: the germ and correction matrix of
  // the truncated family itself, so the residual measures only the O(t^{2p+2})
  // term and not a truncation mismatch.
  CellSolution cell = solve_cell_problem(lat, b, g, freqs);
  EffectiveData eff = effective_matrix(cell);
  DirectionData dd = direction_data(cell, eff, theta);

  ThresholdSweep sweep;
  sweep.theta = theta;
  sweep.germ_norm = spectral_norm(dd.germ_matrix);
  sweep.correction_norm = spectral_norm(dd.correction);
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ges(dd.germ_matrix);
    sweep.germ_eigenvalues = ges.eigenvalues();
  }

  Eigen::MatrixXcd P = kernel_projection(freqs, n);
  const Eigen::Index N = P.rows();
  const int zero = freqs.zero_index();

  for (double t : t_ladder) {
    if (!(t > 0.0) || t > window.t0 * (1.0 + 1e-12)) {
      throw Error("threshold ladder must lie in (0, t0]");
    }
    Eigen::VectorXd k = t * theta;
    FiberOperator fiber = assemble_fiber(lat, b, g, freqs, k);
    auto [F, rank] = threshold_projection(fiber, window);
    (void)rank;
    sweep.t.push_back(t);
    sweep.projection_gap.push_back(spectral_norm(F - P));

    const EigenSystem& es = fiber.eigensystem();
    Eigen::MatrixXcd AF = es.vectors.leftCols(n) *
                          es.values.head(n).asDiagonal() *
                          es.vectors.leftCols(n).adjoint();

    double t2p = std::pow(t, 2 * p);
    Eigen::MatrixXcd SP = Eigen::MatrixXcd::Zero(N, N);
    SP.block(static_cast<Eigen::Index>(zero) * n, static_cast<Eigen::Index>(zero) * n, n, n) =
        dd.germ_matrix;
    Eigen::MatrixXcd GP = Eigen::MatrixXcd::Zero(N, N);
    GP.block(static_cast<Eigen::Index>(zero) * n, static_cast<Eigen::Index>(zero) * n, n, n) =
        dd.correction;

    sweep.residual_without_correction.push_back(spectral_norm(AF - t2p * SP));
    sweep.residual_with_correction.push_back(
        spectral_norm(AF - t2p * SP - std::pow(t, 2 * p + 1) * GP));

    Eigen::VectorXd ratios = es.values.head(n) / t2p;
    sweep.eigenvalue_ratios.push_back(ratios);
  }

  sweep.projection_slope = fit_loglog_slope(sweep.t, sweep.projection_gap);
  sweep.residual_slope_with = fit_loglog_slope(sweep.t, sweep.residual_with_correction);
  sweep.residual_slope_without = fit_loglog_slope(sweep.t, sweep.residual_without_correction);

  // Richardson step on the two smallest t rungs removes the O(t) term of
  // lambda_j(t)/t^{2p}.
  if (sweep.t.size() >= 2) {
    std::size_t last = sweep.t.size() - 1;
    double ratio = sweep.t[last - 1] / sweep.t[last];
    sweep.germ_extrapolated =
        (ratio * sweep.eigenvalue_ratios[last] - sweep.eigenvalue_ratios[last - 1]) /
        (ratio - 1.0);
  } else if (sweep.t.size() == 1) {
    sweep.germ_extrapolated = sweep.eigenvalue_ratios[0];
  }
  return sweep;
}

}  // namespace blochhom
