#ifndef BLOCHHOM_CELL_PROBLEM_HPP
#define BLOCHHOM_CELL_PROBLEM_HPP

#include <Eigen/Dense>
#include <vector>

#include "blochhom/coefficient.hpp"
#include "blochhom/lattice.hpp"
#include "blochhom/symbol.hpp"

namespace blochhom {

// Galerkin solution of the periodic cell problem
//   b(D)^* g(x) (b(D) Lambda(x) + 1_m) = 0,   mean(Lambda) = 0,
// on a truncated plane-wave basis.  corrector[i] holds the n x m Fourier
// coefficient of Lambda at freqs.coords[i]; the zero-frequency entry is
// exactly zero.
struct CellSolution {
  Lattice lattice;
  Symbol symbol;
  PeriodicCoefficient coefficient;
  FrequencySet freqs;
  std::vector<Eigen::MatrixXcd> corrector;
  double residual = 0.0;  // weak-equation residual relative to the source norm

  Eigen::MatrixXcd corrector_at(const Eigen::Vector3i& c) const;
};

CellSolution solve_cell_problem(const Lattice& lat, const Symbol& b,
                                const PeriodicCoefficient& g, const FrequencySet& freqs);

// Effective data derived from a cell solution:
//   g_tilde(x) = g(x) (b(D) Lambda(x) + 1_m),  g0 = mean(g_tilde),
// plus the arithmetic (Voigt) and harmonic (Reuss) bounds.
struct EffectiveData {
  std::vector<CoefficientTerm> g_tilde;  // Fourier terms of g_tilde, lex sorted
  Eigen::MatrixXcd g0;                   // Hermitian positive m x m
  Eigen::MatrixXcd voigt;                // mean of g
  Eigen::MatrixXcd reuss;                // inverse of mean of g^{-1}

  Eigen::MatrixXcd g_tilde_at(const Eigen::Vector3i& c) const;
};

// reuss_grid is the per-dimension resolution of the quadrature used for the
// pointwise inversion defining the Reuss bound (g^{-1} is not a trigonometric
// polynomial, so this leg is numeric by necessity).
EffectiveData effective_matrix(const CellSolution& cell, int reuss_grid = 64);

// Spectral germ S(theta) = b(theta)^* g0 b(theta); positive definite n x n.
Eigen::MatrixXcd germ(const EffectiveData& eff, const Symbol& b, const Eigen::VectorXd& theta);

// theta-resolved first-order data: the Hermitian m x m matrix g1(theta)
// assembled from mean(g_tilde^* B1 Lambda + h.c.) and the induced n x n
// correction matrix G(theta) = b(theta)^* g1(theta) b(theta) acting on the
// kernel of the unperturbed fiber.
struct DirectionData {
  Eigen::VectorXd theta;
  Eigen::MatrixXcd germ_matrix;        // S(theta)
  Eigen::MatrixXcd first_order;        // g1(theta), m x m Hermitian
  Eigen::MatrixXcd correction;         // G(theta), n x n Hermitian
  Eigen::MatrixXcd corrector_map;      // Z(theta) stacked over frequencies, (n*|freq|) x n
  double germ_crosscheck = 0.0;        // |S - b(theta)^* mean((bDL+1)^* g_tilde) b(theta)|
};

DirectionData direction_data(const CellSolution& cell, const EffectiveData& eff,
                             const Eigen::VectorXd& theta);

// Structural report: divergence-free coefficient columns (g0 = Voigt mean and
// Lambda = 0), the square case m = n (g0 = Reuss mean), and whether g_tilde
// degenerates to its constant term.
struct SpecialCaseReport {
  bool divergence_free_columns = false;
  bool voigt_equality_holds = false;   // checked when divergence_free_columns
  bool corrector_vanishes = false;
  bool square_case = false;            // m == n
  bool reuss_equality_holds = false;   // checked when square_case or observed
  bool g_tilde_constant = false;
  double voigt_gap = 0.0;   // ||g0 - voigt|| / ||voigt||
  double reuss_gap = 0.0;   // ||g0 - reuss|| / ||reuss||
};

SpecialCaseReport detect_special_cases(const CellSolution& cell, const EffectiveData& eff);

}  // namespace blochhom

#endif
