#include "blochhom/symbol.hpp"

#include <cmath>
#include <numbers>

namespace blochhom {

double binomial(const MultiIndex& beta, const MultiIndex& gamma) {
  auto choose = [](int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
    return r;
  };
  double r = 1.0;
  for (int i = 0; i < 3; ++i) r *= choose(beta.exp[i], gamma.exp[i]);
  return r;
}

double monomial(const Eigen::VectorXd& xi, const MultiIndex& beta) {
  double r = 1.0;
  for (int i = 0; i < beta.dim; ++i) {
    for (int e = 0; e < beta.exp[i]; ++e) r *= xi[i];
  }
  return r;
}

Symbol::Symbol(int order, int rows_m, int cols_n, int dim, std::vector<SymbolTerm> terms)
    : p_(order), m_(rows_m), n_(cols_n), dim_(dim), terms_(std::move(terms)) {
  if (p_ < 2) throw ConfigInvalid("symbol order p must be >= 2");
  if (m_ < n_) throw ConfigInvalid("symbol must have m >= n");
  for (const auto& t : terms_) {
    if (t.beta.order() != p_) throw ConfigInvalid("symbol term multi-index order != p");
    if (t.coeff.rows() != m_ || t.coeff.cols() != n_)
      throw ConfigInvalid("symbol term coefficient has wrong shape");
  }
}

Eigen::MatrixXcd Symbol::operator()(const Eigen::VectorXd& xi) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m_, n_);
  for (const auto& t : terms_) out += monomial(xi, t.beta) * t.coeff;
  return out;
}

Eigen::MatrixXcd Symbol::correction_symbol(const Eigen::VectorXd& theta,
                                           const Eigen::VectorXd& xi) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m_, n_);
  for (const auto& t : terms_) {
    // gamma <= beta with |gamma| = p-1: decrement one exponent at a time.
    for (int i = 0; i < dim_; ++i) {
      if (t.beta.exp[i] == 0) continue;
      MultiIndex gamma = t.beta;
      gamma.exp[i] -= 1;
      MultiIndex diff;
      diff.dim = dim_;
      diff.exp[i] = 1;
      out += binomial(t.beta, gamma) * monomial(theta, diff) * monomial(xi, gamma) * t.coeff;
    }
  }
  return out;
}

std::vector<Eigen::VectorXd> sample_directions(int dim, int count) {
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(count);
  if (dim == 1) {
    for (int i = 0; i < count; ++i) {
      Eigen::VectorXd th(1);
      th[0] = (i % 2 == 0) ? 1.0 : -1.0;
      dirs.push_back(th);
    }
  } else if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      double a = 2.0 * std::numbers::pi * (i + 0.37) / count;
      Eigen::VectorXd th(2);
      th << std::cos(a), std::sin(a);
      dirs.push_back(th);
    }
  } else {
    // Fibonacci sphere
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      double z = 1.0 - 2.0 * (i + 0.5) / count;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double a = golden * i;
      Eigen::VectorXd th(3);
      th << r * std::cos(a), r * std::sin(a), z;
      dirs.push_back(th);
    }
  }
  return dirs;
}

EllipticityConstants ellipticity_constants(const Symbol& b, int samples) {
  if (samples < 16 * b.dim()) samples = 16 * b.dim();
  EllipticityConstants ec;
  ec.samples = samples;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& th : sample_directions(b.dim(), samples)) {
    Eigen::MatrixXcd bt = b(th);
    Eigen::MatrixXcd gram = bt.adjoint() * bt;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    lo = std::min(lo, es.eigenvalues().minCoeff());
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  }
  ec.alpha0 = lo;
  ec.alpha1 = hi;
  if (!(ec.alpha0 > 1e-10 * ec.alpha1) || !(ec.alpha1 > 0.0)) {
    throw RankDeficientSymbol("symbol fails the maximal-rank condition on sampled directions");
  }
  return ec;
}

}  // namespace blochhom
