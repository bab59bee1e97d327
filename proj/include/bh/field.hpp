#ifndef BH_FIELD_HPP
#define BH_FIELD_HPP

#include <complex>
#include <functional>
#include <vector>

#include "bh/lattice.hpp"

namespace bh {

using cdouble = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;

/** A lattice-periodic matrix-valued coefficient held in two representations:
 * samples on the uniform tensor grid x = sum_i (n_i/N_i) a_i, and Fourier
 * coefficients over a symmetric truncated frequency box.  The convention is
 *
 *   v(x) = sum_kappa vhat_kappa exp(2*pi*i sum_j kappa_j n_j / N_j),
 *
 * i.e. coefficients carry the cell-average normalization: the kappa = 0
 * coefficient is the cell mean, and Parseval reads
 * sum |vhat|^2 = grid mean of |v|^2.  Phases depend only on fractional grid
 * coordinates, so fields are lattice-geometry agnostic. */
class PeriodicField {
 public:
  PeriodicField() = default;

  /** Inverse transform of an explicit coefficient list.  Every kappa must
   * satisfy 2*|kappa_i| < N_i (strictly below Nyquist); violating entries are
   * rejected as aliasing. */
  static PeriodicField from_fourier(int rows, int cols,
                                    const Eigen::VectorXi& grid_shape,
                                    const std::vector<std::pair<Eigen::VectorXi, MatrixXcd>>& coeffs);

  /** Sample a generator on the grid; `frac` are the fractional coordinates
   * n_i/N_i in [0,1)^d.  The Fourier side is the discrete transform truncated
   * at `cutoff` (default: the full grid Nyquist box), which is exact for
   * band-limited generators and a spectrally small truncation otherwise. */
  static PeriodicField from_samples(int rows, int cols,
                                    const Eigen::VectorXi& grid_shape,
                                    const std::function<MatrixXcd(const Eigen::VectorXd&)>& gen,
                                    Eigen::VectorXi cutoff = Eigen::VectorXi());

  static PeriodicField constant(const MatrixXcd& value, const Eigen::VectorXi& grid_shape);
  static PeriodicField identity(int n, const Eigen::VectorXi& grid_shape);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int dim() const { return static_cast<int>(grid_shape_.size()); }
  const Eigen::VectorXi& grid_shape() const { return grid_shape_; }
  int num_samples() const { return static_cast<int>(samples_.size()); }
  const MatrixXcd& sample(int i) const { return samples_[i]; }
  const FrequencySet& freqs() const { return freqs_; }
  /** Coefficient at kappa; zero matrix if outside the stored box. */
  MatrixXcd fourier(const Eigen::VectorXi& kappa) const;
  const MatrixXcd& fourier_at(int idx) const { return fourier_[idx]; }
  Eigen::VectorXi grid_index(int flat) const;
  Eigen::VectorXd frac_coord(int flat) const;

  MatrixXcd mean() const;
  MatrixXcd harmonic_mean() const;
  double sup_norm() const;
  /** Smallest eigenvalue of the Hermitian part over all samples. */
  double min_eigenvalue() const;
  bool is_hermitian(double tol = 1e-12) const;
  double max_real_deviation() const;

  PeriodicField inverse() const;
  /** Hermitian positive-semidefinite square root, sample-wise. */
  PeriodicField sqrt_psd() const;
  PeriodicField adjoint() const;
  PeriodicField map(const std::function<MatrixXcd(const MatrixXcd&)>& op,
                    int rows, int cols, Eigen::VectorXi cutoff = Eigen::VectorXi()) const;
  /** Alias-free pointwise product: both operands are re-sampled (by exact
   * evaluation of their truncated series) on a grid holding the sum of the
   * bandwidths before multiplying. */
  PeriodicField multiply(const PeriodicField& other) const;
  PeriodicField add(const PeriodicField& other) const;
  PeriodicField scale(const cdouble& a) const;
  /** Evaluate the truncated Fourier series on a (finer) grid. */
  PeriodicField resample(const Eigen::VectorXi& grid_shape) const;
  /** Replace the samples by the synthesis of the stored coefficients, making
   * the field exactly the trigonometric polynomial its dictionary describes. */
  PeriodicField as_trig_poly() const;

  /** Relative Parseval defect between the two representations (zero for
   * band-limited fields). */
  double parseval_defect() const;

 private:
  int rows_ = 0, cols_ = 0;
  Eigen::VectorXi grid_shape_;
  std::vector<MatrixXcd> samples_;
  FrequencySet freqs_;
  std::vector<MatrixXcd> fourier_;

  void compute_fourier(const Eigen::VectorXi& cutoff);
  static std::vector<MatrixXcd> synthesize(int rows, int cols,
                                           const Eigen::VectorXi& grid_shape,
                                           const FrequencySet& freqs,
                                           const std::vector<MatrixXcd>& coeffs);
};

}  // namespace bh

#endif
