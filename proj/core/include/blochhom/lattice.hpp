#ifndef BLOCHHOM_LATTICE_HPP
#define BLOCHHOM_LATTICE_HPP

#include <Eigen/Dense>
#include <vector>

#include "blochhom/errors.hpp"

namespace blochhom {

// Primal/dual lattice pair.  Basis vectors are the columns of `primal` and
// `dual`; they satisfy <b_i, a_j> = 2 pi delta_ij.  `inradius` is r0, the
// radius of the ball inscribed in the closed Brillouin zone, with
// 2 r0 = min |b| over nonzero dual lattice vectors.
struct Lattice {
  int dim = 0;
  Eigen::MatrixXd primal;
  Eigen::MatrixXd dual;
  double cell_volume = 0.0;
  double dual_cell_volume = 0.0;
  double inradius = 0.0;

  Eigen::VectorXd dual_vector(const Eigen::Vector3i& coords) const;
};

Lattice build_lattice(const Eigen::MatrixXd& primal_basis);

// Dual lattice vectors with |b| <= cutoff, ordered lexicographically on
// integer coordinates so downstream matrix layouts are reproducible.
// Always contains 0 and is closed under negation.
struct FrequencySet {
  double cutoff = 0.0;
  std::vector<Eigen::Vector3i> coords;   // lex sorted, padded with zeros past dim
  std::vector<Eigen::VectorXd> vectors;  // dual-space points, size dim
  int index_of(const Eigen::Vector3i& c) const;  // -1 if absent
  int size() const { return static_cast<int>(coords.size()); }
  int zero_index() const { return index_of(Eigen::Vector3i::Zero()); }
  double max_norm() const;
};

FrequencySet truncate(const Lattice& lat, double cutoff);

enum class SampleMode { SupGrid, Quadrature };

// Uniform grid on the fundamental dual parallelepiped, offset by half a step
// so k = 0 is never hit, then translated into the Brillouin zone by the dual
// vector nearest each point.  Quadrature mode carries the product-rule
// weights |dual cell| / M^d.
struct BrillouinGrid {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> weights;  // empty in SupGrid mode
  bool avoids_zero = true;
};

BrillouinGrid sample_brillouin(const Lattice& lat, int resolution, SampleMode mode);

// Membership test for closure of the Brillouin zone: |k| <= |k - b| + tol for
// every nonzero dual vector within the search radius.
bool in_brillouin_zone(const Lattice& lat, const Eigen::VectorXd& k, double tol = 1e-12);

// Translate k by the dual lattice vector minimizing |k - b|.
Eigen::VectorXd reduce_to_brillouin(const Lattice& lat, const Eigen::VectorXd& k);

}  // namespace blochhom

#endif
