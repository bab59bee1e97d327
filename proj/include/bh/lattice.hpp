#ifndef BH_LATTICE_HPP
#define BH_LATTICE_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace bh {

/** A periodicity lattice together with its dual.
 *
 * Rows of `basis` are the primitive vectors a_1..a_d; rows of `dual_basis`
 * are b^1..b^d with <b^i, a_j> = 2*pi*delta_ij.  `r0` is half the length of
 * the shortest nonzero dual lattice vector, so the ball |k| < r0 around any
 * dual lattice point contains no other dual lattice point. */
struct Lattice {
  int dim = 0;
  Eigen::MatrixXd basis;       // d x d, row i = a_i
  Eigen::MatrixXd dual_basis;  // d x d, row i = b^i
  double cell_volume = 0.0;      // |Omega|
  double dual_cell_volume = 0.0; // |Omega~|
  double r0 = 0.0;

  static Lattice from_basis(const Eigen::MatrixXd& a);

  /** The dual vector with integer coordinates kappa: sum_i kappa_i b^i. */
  Eigen::VectorXd dual_vector(const Eigen::VectorXi& kappa) const;
};

/** Rows b^i of the dual basis for the given primitive rows a_i. */
Eigen::MatrixXd dual_basis(const Eigen::MatrixXd& basis);

/** Half the minimal nonzero dual vector norm, found by shell enumeration.
 * The search cube expands until every unexplored shell provably exceeds the
 * current minimum (lower-bounded through the smallest singular value of the
 * dual basis). */
double minimal_dual_half_norm(const Eigen::MatrixXd& dual);

/** Truncated symmetric box of dual-lattice integer coordinates.
 *
 * Members are all kappa with |kappa_i| <= cutoff_i, ordered
 * lexicographically (axis 0 slowest), so the set is deterministic, contains
 * 0 and is closed under negation.  Cutoffs may differ per axis; the
 * isotropic constructor fills all axes with the same K. */
class FrequencySet {
 public:
  FrequencySet() = default;
  FrequencySet(const Eigen::VectorXi& cutoff);
  FrequencySet(int dim, int K);

  int dim() const { return static_cast<int>(cutoff_.size()); }
  const Eigen::VectorXi& cutoff() const { return cutoff_; }
  int size() const { return size_; }
  const Eigen::VectorXi& member(int i) const { return members_[i]; }
  const std::vector<Eigen::VectorXi>& members() const { return members_; }

  /** Position of kappa in the ordering, or -1 if outside the box. */
  int index_of(const Eigen::VectorXi& kappa) const;
  int zero_index() const { return zero_index_; }

 private:
  Eigen::VectorXi cutoff_;
  std::vector<Eigen::VectorXi> members_;
  Eigen::VectorXi stride_;
  int size_ = 0;
  int zero_index_ = 0;
};

FrequencySet frequency_set(const Lattice& lat, int K);
FrequencySet frequency_set(const Lattice& lat, const Eigen::VectorXi& cutoff);

/** Midpoint-rule quadrature over a fundamental parallelepiped of the dual
 * lattice, centered at 0: N^d points with equal weights summing to the dual
 * cell volume.  Fiber quantities are dual-lattice periodic in k, so maxima
 * and integrals over this domain equal those over the Brillouin zone. */
struct KGrid {
  std::vector<Eigen::VectorXd> points;
  double weight = 0.0;  // identical for every point
};

KGrid k_grid(const Lattice& lat, int N);

}  // namespace bh

#endif
