#ifndef BLOCHHOM_SYMBOL_HPP
#define BLOCHHOM_SYMBOL_HPP

#include <Eigen/Dense>
#include <vector>

#include "blochhom/errors.hpp"

namespace blochhom {

// Multi-index beta = (beta_1..beta_d) of nonnegative integers.
struct MultiIndex {
  Eigen::Vector3i exp = Eigen::Vector3i::Zero();
  int dim = 0;

  int order() const { return exp[0] + exp[1] + exp[2]; }
  bool leq(const MultiIndex& other) const {
    return exp[0] <= other.exp[0] && exp[1] <= other.exp[1] && exp[2] <= other.exp[2];
  }
};

// Product of componentwise binomial coefficients C(beta_i, gamma_i).
double binomial(const MultiIndex& beta, const MultiIndex& gamma);

// xi^beta = prod xi_i^{beta_i}.
double monomial(const Eigen::VectorXd& xi, const MultiIndex& beta);

struct SymbolTerm {
  MultiIndex beta;
  Eigen::MatrixXcd coeff;  // m x n
};

// Homogeneous matrix symbol b(xi) = sum_{|beta|=p} b_beta xi^beta of an
// order-p differential operator, with m x n constant coefficient matrices,
// m >= n.
class Symbol {
 public:
  Symbol(int order, int rows_m, int cols_n, int dim, std::vector<SymbolTerm> terms);

  int order() const { return p_; }
  int rows() const { return m_; }
  int cols() const { return n_; }
  int dim() const { return dim_; }
  const std::vector<SymbolTerm>& terms() const { return terms_; }

  // b(xi)
  Eigen::MatrixXcd operator()(const Eigen::VectorXd& xi) const;

  // Symbol of the order p-1 part of b(D + t*theta) at first order in t:
  //   B1(theta; xi) = sum_beta b_beta sum_{gamma<=beta, |gamma|=p-1}
  //                     C_beta^gamma theta^{beta-gamma} xi^gamma.
  Eigen::MatrixXcd correction_symbol(const Eigen::VectorXd& theta,
                                     const Eigen::VectorXd& xi) const;

 private:
  int p_, m_, n_, dim_;
  std::vector<SymbolTerm> terms_;
};

// alpha0/alpha1 bounds of b(theta)^* b(theta) over sampled unit directions.
struct EllipticityConstants {
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  int samples = 0;
};

// Dense deterministic sampling of the unit sphere (2 points in d=1, uniform
// angles in d=2, Fibonacci sphere in d=3).
std::vector<Eigen::VectorXd> sample_directions(int dim, int count);

EllipticityConstants ellipticity_constants(const Symbol& b, int samples);

}  // namespace blochhom

#endif
