#include "blochhom/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace blochhom {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool lex_less(const Eigen::Vector3i& a, const Eigen::Vector3i& b) {
  for (int i = 0; i < 3; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// Integer boxes large enough to contain every dual vector of norm <= cutoff:
// i = Binv * b componentwise, so |i_j| <= ||row_j(Binv)|| * |b|.
Eigen::Vector3i enumeration_box(const Lattice& lat, double cutoff) {
  Eigen::MatrixXd Binv = lat.dual.inverse();
  Eigen::Vector3i box = Eigen::Vector3i::Zero();
  for (int j = 0; j < lat.dim; ++j) {
    box[j] = static_cast<int>(std::floor(Binv.row(j).norm() * cutoff + 1e-9));
  }
  return box;
}

template <typename Fn>
void for_each_integer_point(int dim, const Eigen::Vector3i& box, Fn&& fn) {
  Eigen::Vector3i lo = Eigen::Vector3i::Zero(), hi = Eigen::Vector3i::Zero();
  for (int j = 0; j < dim; ++j) {
    lo[j] = -box[j];
    hi[j] = box[j];
  }
  Eigen::Vector3i c = lo;
  while (true) {
    fn(c);
    int j = dim - 1;
    while (j >= 0) {
      if (++c[j] <= hi[j]) break;
      c[j] = lo[j];
      --j;
    }
    if (j < 0) break;
  }
}

}  // namespace

Eigen::VectorXd Lattice::dual_vector(const Eigen::Vector3i& coords) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < dim; ++j) v += coords[j] * dual.col(j);
  return v;
}

Lattice build_lattice(const Eigen::MatrixXd& primal_basis) {
  const int d = static_cast<int>(primal_basis.rows());
  if (d < 1 || d > 3 || primal_basis.cols() != d) {
    throw DegenerateBasis("primal basis must be a square d x d matrix with 1 <= d <= 3");
  }
  double det = primal_basis.determinant();
  double scale = primal_basis.colwise().norm().maxCoeff();
  if (std::abs(det) < 1e-12 * std::pow(scale, d)) {
    throw DegenerateBasis("primal basis determinant below degeneracy threshold");
  }

  Lattice lat;
  lat.dim = d;
  lat.primal = primal_basis;
  // <b_i, a_j> = 2 pi delta_ij  =>  B = 2 pi A^{-T}.
  lat.dual = kTwoPi * primal_basis.inverse().transpose();
  lat.cell_volume = std::abs(det);
  lat.dual_cell_volume = std::abs(lat.dual.determinant());

  // Shortest nonzero dual vector by finite enumeration; a box of radius
  // 3 * (longest dual basis vector) provably contains it.
  double longest = lat.dual.colwise().norm().maxCoeff();
  Eigen::Vector3i box = enumeration_box(lat, 3.0 * longest);
  double min_norm = std::numeric_limits<double>::infinity();
  for_each_integer_point(d, box, [&](const Eigen::Vector3i& c) {
    if (c.head(3).isZero()) return;
    min_norm = std::min(min_norm, lat.dual_vector(c).norm());
  });
  lat.inradius = 0.5 * min_norm;
  return lat;
}

int FrequencySet::index_of(const Eigen::Vector3i& c) const {
  auto it = std::lower_bound(coords.begin(), coords.end(), c, lex_less);
  if (it != coords.end() && *it == c) return static_cast<int>(it - coords.begin());
  return -1;
}

double FrequencySet::max_norm() const {
  double m = 0.0;
  for (const auto& v : vectors) m = std::max(m, v.norm());
  return m;
}

FrequencySet truncate(const Lattice& lat, double cutoff) {
  if (cutoff < 0.0) throw EmptyTruncation("negative truncation cutoff");
  FrequencySet fs;
  fs.cutoff = cutoff;
  Eigen::Vector3i box = enumeration_box(lat, cutoff);
  for_each_integer_point(lat.dim, box, [&](const Eigen::Vector3i& c) {
    if (lat.dual_vector(c).norm() <= cutoff * (1.0 + 1e-14) + 1e-14) {
      fs.coords.push_back(c);
    }
  });
  std::sort(fs.coords.begin(), fs.coords.end(), lex_less);
  fs.vectors.reserve(fs.coords.size());
  for (const auto& c : fs.coords) fs.vectors.push_back(lat.dual_vector(c));
  return fs;
}

Eigen::VectorXd reduce_to_brillouin(const Lattice& lat, const Eigen::VectorXd& k) {
  // Candidates around the integer part of Binv * k; +-2 covers every point of
  // the fundamental parallelepiped for any basis.
  Eigen::VectorXd frac = lat.dual.inverse() * k;
  Eigen::Vector3i base = Eigen::Vector3i::Zero();
  for (int j = 0; j < lat.dim; ++j) base[j] = static_cast<int>(std::llround(frac[j]));

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_k = k;
  Eigen::Vector3i box = Eigen::Vector3i::Zero();
  for (int j = 0; j < lat.dim; ++j) box[j] = 2;
  for_each_integer_point(lat.dim, box, [&](const Eigen::Vector3i& off) {
    Eigen::Vector3i c = Eigen::Vector3i::Zero();
    for (int j = 0; j < lat.dim; ++j) c[j] = base[j] + off[j];
    Eigen::VectorXd shifted = k - lat.dual_vector(c);
    double nrm = shifted.norm();
    if (nrm < best - 1e-15) {
      best = nrm;
      best_k = shifted;
    }
  });
  return best_k;
}

bool in_brillouin_zone(const Lattice& lat, const Eigen::VectorXd& k, double tol) {
  double kn = k.norm();
  double search = 4.0 * std::max(lat.dual.colwise().norm().maxCoeff(), 2.0 * lat.inradius);
  Eigen::Vector3i box = enumeration_box(lat, search);
  bool inside = true;
  for_each_integer_point(lat.dim, box, [&](const Eigen::Vector3i& c) {
    if (c.head(3).isZero()) return;
    if (kn > (k - lat.dual_vector(c)).norm() + tol) inside = false;
  });
  return inside;
}

BrillouinGrid sample_brillouin(const Lattice& lat, int resolution, SampleMode mode) {
  if (resolution < 1) throw Error("Brillouin resolution must be >= 1");
  BrillouinGrid grid;
  const int d = lat.dim;
  long total = 1;
  for (int j = 0; j < d; ++j) total *= resolution;
  grid.points.reserve(total);

  Eigen::Vector3i idx = Eigen::Vector3i::Zero();
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    for (int j = d - 1; j >= 0; --j) {
      idx[j] = static_cast<int>(rem % resolution);
      rem /= resolution;
    }
    Eigen::VectorXd k = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < d; ++j) {
      k += ((idx[j] + 0.5) / resolution) * lat.dual.col(j);
    }
    grid.points.push_back(reduce_to_brillouin(lat, k));
  }
  if (mode == SampleMode::Quadrature) {
    grid.weights.assign(grid.points.size(), lat.dual_cell_volume / static_cast<double>(total));
  }
  grid.avoids_zero = true;
  for (const auto& k : grid.points) {
    if (k.norm() < 1e-14) grid.avoids_zero = false;
  }
  return grid;
}

}  // namespace blochhom
