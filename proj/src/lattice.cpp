#include "bh/lattice.hpp"

#include <cmath>
#include <numbers>

namespace bh {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Eigen::MatrixXd dual_basis(const Eigen::MatrixXd& basis) {
  if (basis.rows() != basis.cols() || basis.rows() < 1)
    throw std::invalid_argument("lattice basis must be a square d x d matrix");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis.transpose());
  if (!lu.isInvertible())
    throw std::invalid_argument("degenerate lattice: basis vectors are linearly dependent");
  // rows b^i of B solve B * A^T = 2*pi*I
  return kTwoPi * lu.inverse();
}

double minimal_dual_half_norm(const Eigen::MatrixXd& dual) {
  const int d = static_cast<int>(dual.rows());
  // |sum_i kappa_i b^i| >= sigma_min(dual) * |kappa|_2 >= sigma_min * |kappa|_inf
  const double sigma_min = dual.jacobiSvd().singularValues().minCoeff();
  double best = std::numeric_limits<double>::infinity();
  for (int R = 1;; ++R) {
    // enumerate the surface |kappa|_inf == R
    Eigen::VectorXi kappa = Eigen::VectorXi::Constant(d, -R);
    while (true) {
      if (kappa.cwiseAbs().maxCoeff() == R) {
        double norm = (dual.transpose() * kappa.cast<double>()).norm();
        best = std::min(best, norm);
      }
      int axis = d - 1;
      while (axis >= 0 && kappa[axis] == R) kappa[axis--] = -R;
      if (axis < 0) break;
      ++kappa[axis];
    }
    if (sigma_min * (R + 1) > best) break;
  }
  return 0.5 * best;
}

Lattice Lattice::from_basis(const Eigen::MatrixXd& a) {
  Lattice lat;
  lat.dim = static_cast<int>(a.rows());
  lat.basis = a;
  lat.dual_basis = bh::dual_basis(a);
  lat.cell_volume = std::abs(a.determinant());
  lat.dual_cell_volume = std::abs(lat.dual_basis.determinant());
  lat.r0 = minimal_dual_half_norm(lat.dual_basis);
  return lat;
}

Eigen::VectorXd Lattice::dual_vector(const Eigen::VectorXi& kappa) const {
  return dual_basis.transpose() * kappa.cast<double>();
}

FrequencySet::FrequencySet(const Eigen::VectorXi& cutoff) : cutoff_(cutoff) {
  const int d = static_cast<int>(cutoff.size());
  if (d < 1) throw std::invalid_argument("frequency set needs dim >= 1");
  if ((cutoff.array() < 0).any()) throw std::invalid_argument("negative frequency cutoff");
  stride_.resize(d);
  size_ = 1;
  for (int i = d - 1; i >= 0; --i) {
    stride_[i] = size_;
    size_ *= 2 * cutoff_[i] + 1;
  }
  members_.reserve(size_);
  Eigen::VectorXi kappa = -cutoff_;
  for (int idx = 0; idx < size_; ++idx) {
    members_.push_back(kappa);
    int axis = d - 1;
    while (axis >= 0 && kappa[axis] == cutoff_[axis]) kappa[axis--] = -cutoff_[axis];
    if (axis >= 0) ++kappa[axis];
  }
  zero_index_ = index_of(Eigen::VectorXi::Zero(d));
}

FrequencySet::FrequencySet(int dim, int K)
    : FrequencySet(Eigen::VectorXi::Constant(dim, K)) {}

int FrequencySet::index_of(const Eigen::VectorXi& kappa) const {
  int idx = 0;
  for (int i = 0; i < dim(); ++i) {
    if (std::abs(kappa[i]) > cutoff_[i]) return -1;
    idx += (kappa[i] + cutoff_[i]) * stride_[i];
  }
  return idx;
}

FrequencySet frequency_set(const Lattice& lat, int K) {
  if (K < 1) throw std::invalid_argument("frequency cutoff K must be >= 1");
  return FrequencySet(lat.dim, K);
}

FrequencySet frequency_set(const Lattice& lat, const Eigen::VectorXi& cutoff) {
  if (cutoff.size() != lat.dim) throw std::invalid_argument("cutoff dimension mismatch");
  return FrequencySet(cutoff);
}

KGrid k_grid(const Lattice& lat, int N) {
  if (N < 1) throw std::invalid_argument("k-grid needs N >= 1");
  KGrid grid;
  const int d = lat.dim;
  int total = 1;
  for (int i = 0; i < d; ++i) total *= N;
  grid.points.reserve(total);
  grid.weight = lat.dual_cell_volume / total;
  Eigen::VectorXi n = Eigen::VectorXi::Zero(d);
  for (int idx = 0; idx < total; ++idx) {
    Eigen::VectorXd frac(d);
    for (int i = 0; i < d; ++i) frac[i] = (n[i] + 0.5) / N - 0.5;
    grid.points.push_back(lat.dual_basis.transpose() * frac);
    int axis = d - 1;
    while (axis >= 0 && n[axis] == N - 1) n[axis--] = 0;
    if (axis >= 0) ++n[axis];
  }
  return grid;
}

}  // namespace bh
