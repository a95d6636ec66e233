#include "blochhom/cell_problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "blochhom/linalg.hpp"

namespace blochhom {

namespace {

struct Vec3iLess {
  bool operator()(const Eigen::Vector3i& a, const Eigen::Vector3i& b) const {
    for (int i = 0; i < 3; ++i) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }
};

}  // namespace

Eigen::MatrixXcd CellSolution::corrector_at(const Eigen::Vector3i& c) const {
  int idx = freqs.index_of(c);
  if (idx < 0) return Eigen::MatrixXcd::Zero(symbol.cols(), symbol.rows());
  return corrector[idx];
}

CellSolution solve_cell_problem(const Lattice& lat, const Symbol& b,
                                const PeriodicCoefficient& g, const FrequencySet& freqs) {
  if (freqs.cutoff <= 2.0 * g.max_frequency()) {
    throw TruncationTooSmall("cell frequency cutoff must exceed twice the coefficient bandwidth");
  }
  const int n = b.cols();
  const int m = b.rows();
  const int F = freqs.size();
  const int zero = freqs.zero_index();

  // Nonzero frequencies carry the unknowns; the zero-mean constraint removes
  // the zero block entirely.
  std::vector<int> nz;
  nz.reserve(F - 1);
  for (int i = 0; i < F; ++i) {
    if (i != zero) nz.push_back(i);
  }
  const int N = static_cast<int>(nz.size()) * n;

  // Cache b(b) per frequency.
  std::vector<Eigen::MatrixXcd> bsym(F);
  for (int i = 0; i < F; ++i) bsym[i] = b(freqs.vectors[i]);

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(N, m);
  for (int r = 0; r < static_cast<int>(nz.size()); ++r) {
    const int i = nz[r];
    for (int c = 0; c < static_cast<int>(nz.size()); ++c) {
      const int j = nz[c];
      Eigen::Vector3i diff = freqs.coords[i] - freqs.coords[j];
      Eigen::MatrixXcd gij = g.fourier(diff);
      if (gij.isZero(0.0)) continue;
      A.block(r * n, c * n, n, n) = bsym[i].adjoint() * gij * bsym[j];
    }
    // source: -b(b_i)^* ghat(b_i) from the constant test column
    rhs.block(r * n, 0, n, m) = -bsym[i].adjoint() * g.fourier(freqs.coords[i]);
  }

  if ((A - A.adjoint()).norm() > 1e-12 * std::max(1.0, A.norm())) {
    throw SingularCellSystem("cell Galerkin matrix is not Hermitian; assembly is inconsistent");
  }

  Eigen::LDLT<Eigen::MatrixXcd> ldlt(A);
  if (ldlt.info() != Eigen::Success) {
    throw SingularCellSystem("cell Galerkin factorization failed");
  }
  Eigen::MatrixXcd sol = ldlt.solve(rhs);
  if (!sol.allFinite() || (A * sol - rhs).norm() > 1e-8 * std::max(1.0, rhs.norm())) {
    throw SingularCellSystem("cell Galerkin system is numerically singular");
  }

  CellSolution cell{lat, b, g, freqs, {}, 0.0};
  cell.corrector.assign(F, Eigen::MatrixXcd::Zero(n, m));
  for (int r = 0; r < static_cast<int>(nz.size()); ++r) {
    cell.corrector[nz[r]] = sol.block(r * n, 0, n, m);
  }

  // Weak residual: for each test frequency b != 0,
  //   b(b)^* sum_{b'} ghat(b-b') [ b(b') Lambda(b') + delta_{b',0} 1_m ]
  // relative to the source norm.
  double source = 0.0, worst = 0.0;
  for (int r = 0; r < static_cast<int>(nz.size()); ++r) {
    const int i = nz[r];
    Eigen::MatrixXcd acc = bsym[i].adjoint() * g.fourier(freqs.coords[i]);
    for (int j = 0; j < F; ++j) {
      Eigen::MatrixXcd gij = g.fourier(freqs.coords[i] - freqs.coords[j]);
      if (gij.isZero(0.0)) continue;
      if (j != zero) acc += bsym[i].adjoint() * gij * (bsym[j] * cell.corrector[j]);
    }
    worst = std::max(worst, acc.norm());
    source = std::max(source, rhs.block(r * n, 0, n, m).norm());
  }
  cell.residual = worst / std::max(source, 1e-300);
  if (source == 0.0) cell.residual = worst;  // constant g: source vanishes identically
  return cell;
}

Eigen::MatrixXcd EffectiveData::g_tilde_at(const Eigen::Vector3i& c) const {
  for (const auto& t : g_tilde) {
    if (t.coords == c) return t.matrix;
  }
  return Eigen::MatrixXcd::Zero(g0.rows(), g0.cols());
}

EffectiveData effective_matrix(const CellSolution& cell, int reuss_grid) {
  const Symbol& b = cell.symbol;
  const PeriodicCoefficient& g = cell.coefficient;
  const int m = b.rows();
  const int F = cell.freqs.size();
  const int zero = cell.freqs.zero_index();

  // T(b') = b(b') Lambda(b') + delta_{b',0} 1_m, then g_tilde = g * T by
  // Fourier convolution: ghat_tilde(c) = sum_{b'} ghat(c - b') T(b').
  std::vector<Eigen::MatrixXcd> T(F);
  for (int j = 0; j < F; ++j) {
    T[j] = b(cell.freqs.vectors[j]) * cell.corrector[j];
    if (j == zero) T[j] += Eigen::MatrixXcd::Identity(m, m);
  }
  std::map<Eigen::Vector3i, Eigen::MatrixXcd, Vec3iLess> acc;
  for (const auto& gt : g.terms()) {
    for (int j = 0; j < F; ++j) {
      if (T[j].isZero(0.0)) continue;
      Eigen::Vector3i c = gt.coords + cell.freqs.coords[j];
      auto [it, fresh] = acc.try_emplace(c, Eigen::MatrixXcd::Zero(m, m));
      it->second += gt.matrix * T[j];
    }
  }

  EffectiveData eff;
  for (auto& [c, mat] : acc) {
    if (mat.norm() < 1e-300) continue;
    eff.g_tilde.push_back({c, mat});
  }

  Eigen::MatrixXcd g0 = acc.count(Eigen::Vector3i::Zero())
                            ? acc[Eigen::Vector3i::Zero()]
                            : Eigen::MatrixXcd::Zero(m, m);
  eff.g0 = 0.5 * (g0 + g0.adjoint());
  eff.voigt = g.fourier(Eigen::Vector3i::Zero());

  // Reuss bound by pointwise inversion on a quadrature grid.
  const Lattice& lat = cell.lattice;
  const int d = lat.dim;
  long total = 1;
  for (int j = 0; j < d; ++j) total *= reuss_grid;
  Eigen::MatrixXcd inv_mean = Eigen::MatrixXcd::Zero(m, m);
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    for (int j = d - 1; j >= 0; --j) {
      x += (static_cast<double>(rem % reuss_grid) / reuss_grid) * lat.primal.col(j);
      rem /= reuss_grid;
    }
    inv_mean += g.eval(x).inverse();
  }
  inv_mean /= static_cast<double>(total);
  Eigen::MatrixXcd reuss = inv_mean.inverse();
  eff.reuss = 0.5 * (reuss + reuss.adjoint());

  const double scale = spectral_norm(eff.voigt);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> upper(eff.voigt - eff.g0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> lower(eff.g0 - eff.reuss);
  if (upper.eigenvalues().minCoeff() < -1e-9 * scale ||
      lower.eigenvalues().minCoeff() < -1e-9 * scale) {
    throw BracketingViolation("effective matrix escapes the Voigt-Reuss bracket; raise the cutoff");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> pos(eff.g0);
  if (!(pos.eigenvalues().minCoeff() > 0.0)) {
    throw BracketingViolation("effective matrix is not positive definite");
  }
  return eff;
}

Eigen::MatrixXcd germ(const EffectiveData& eff, const Symbol& b, const Eigen::VectorXd& theta) {
  if (std::abs(theta.norm() - 1.0) > 1e-12) throw Error("germ direction must be a unit vector");
  Eigen::MatrixXcd bt = b(theta);
  Eigen::MatrixXcd S = bt.adjoint() * eff.g0 * bt;
  S = 0.5 * (S + S.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
  if (!(es.eigenvalues().minCoeff() > 0.0)) {
    throw DegenerateGerm("germ is not positive definite; effective matrix is corrupted");
  }
  return S;
}

DirectionData direction_data(const CellSolution& cell, const EffectiveData& eff,
                             const Eigen::VectorXd& theta) {
  const Symbol& b = cell.symbol;
  const int n = b.cols();
  const int m = b.rows();
  const int F = cell.freqs.size();
  const int zero = cell.freqs.zero_index();

  DirectionData dd;
  dd.theta = theta;
  dd.germ_matrix = germ(eff, b, theta);

  // First-order matrix: g1 = sum_b [ gt(b)^* C1(b) + C1(b)^* gt(b) ] with
  // C1(b) = B1(theta; b) Lambda(b) the Fourier data of B1(theta; D) Lambda.
  Eigen::MatrixXcd g1 = Eigen::MatrixXcd::Zero(m, m);
  for (int j = 0; j < F; ++j) {
    if (cell.corrector[j].isZero(0.0)) continue;
    Eigen::MatrixXcd C1 = b.correction_symbol(theta, cell.freqs.vectors[j]) * cell.corrector[j];
    Eigen::MatrixXcd gt = eff.g_tilde_at(cell.freqs.coords[j]);
    g1 += gt.adjoint() * C1 + C1.adjoint() * gt;
  }
  dd.first_order = 0.5 * (g1 + g1.adjoint());

  Eigen::MatrixXcd bt = b(theta);
  Eigen::MatrixXcd G = bt.adjoint() * dd.first_order * bt;
  dd.correction = 0.5 * (G + G.adjoint());

  // Z(theta) omega = Lambda(x) b(theta) omega, stacked over frequencies.
  dd.corrector_map = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n) * F, n);
  for (int j = 0; j < F; ++j) {
    dd.corrector_map.block(static_cast<Eigen::Index>(j) * n, 0, n, n) =
        cell.corrector[j] * bt;
  }

  // Independent germ assembly through R^* R = b^* mean((bDL+1)^* g_tilde) b.
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(m, m);
  for (int j = 0; j < F; ++j) {
    Eigen::MatrixXcd T = b(cell.freqs.vectors[j]) * cell.corrector[j];
    if (j == zero) T += Eigen::MatrixXcd::Identity(m, m);
    if (T.isZero(0.0)) continue;
    gram += T.adjoint() * eff.g_tilde_at(cell.freqs.coords[j]);
  }
  Eigen::MatrixXcd S2 = bt.adjoint() * gram * bt;
  dd.germ_crosscheck = (dd.germ_matrix - 0.5 * (S2 + S2.adjoint())).norm();
  return dd;
}

SpecialCaseReport detect_special_cases(const CellSolution& cell, const EffectiveData& eff) {
  const Symbol& b = cell.symbol;
  const PeriodicCoefficient& g = cell.coefficient;
  SpecialCaseReport rep;

  double scale = 0.0, div = 0.0;
  for (const auto& t : g.terms()) {
    Eigen::VectorXd bc = g.lattice().dual_vector(t.coords);
    Eigen::MatrixXcd bsym = b(bc);
    scale = std::max(scale, bsym.norm() * t.matrix.norm());
    div = std::max(div, (bsym.adjoint() * t.matrix).norm());
  }
  rep.divergence_free_columns = (div <= 1e-12 * std::max(scale, 1.0));

  double voigt_scale = std::max(spectral_norm(eff.voigt), 1e-300);
  rep.voigt_gap = spectral_norm(eff.g0 - eff.voigt) / voigt_scale;
  rep.reuss_gap = spectral_norm(eff.g0 - eff.reuss) / voigt_scale;

  double corr = 0.0;
  for (const auto& c : cell.corrector) corr = std::max(corr, c.norm());
  rep.corrector_vanishes = (corr <= 1e-10);

  if (rep.divergence_free_columns) {
    rep.voigt_equality_holds = (rep.voigt_gap <= 1e-8) && rep.corrector_vanishes;
  }
  rep.square_case = (b.rows() == b.cols());
  rep.reuss_equality_holds = (rep.reuss_gap <= 1e-8);

  if (rep.reuss_equality_holds) {
    double off = 0.0;
    for (const auto& t : eff.g_tilde) {
      if (!t.coords.isZero()) off = std::max(off, t.matrix.norm());
    }
    rep.g_tilde_constant = (off <= 1e-8 * voigt_scale);
  }
  return rep;
}

}  // namespace blochhom
