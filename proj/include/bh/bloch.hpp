#ifndef BH_BLOCH_HPP
#define BH_BLOCH_HPP

#include "bh/germ.hpp"

namespace bh {

/** Plane-wave Galerkin discretization of one fiber.  X maps the n-component
 * truncated Fourier space to the m-component one via h * b(D+k) * f
 * (h = g^{1/2} pointwise); A = X* X is Hermitian PSD by construction.
 * Row/column blocks follow the frequency set's deterministic order. */
struct FiberOperator {
  Eigen::VectorXd k;
  FrequencySet freqs;
  MatrixXcd X;
  MatrixXcd A;

  int block_dim() const { return static_cast<int>(A.rows()) / freqs.size(); }
};

FiberOperator assemble_fiber(const OperatorModel& model, const Eigen::VectorXd& k,
                             const Eigen::VectorXi& cutoff);
FiberOperator assemble_fiber(const OperatorModel& model, const Eigen::VectorXd& k, int K);

/** Block-diagonal effective fiber: f0 b(b+k)* g0 b(b+k) f0 per frequency. */
MatrixXcd effective_fiber(const OperatorModel& model, const MatrixXcd& g0,
                          const Eigen::VectorXd& k, const FrequencySet& freqs);

/** Block convolution matrix of a field over the frequency set (entry (c,b) is
 * the coefficient at c - b); realizes pointwise multiplication in the
 * truncated space. */
MatrixXcd convolution_matrix(const PeriodicField& field, const FrequencySet& freqs);

struct FiberSpectrum {
  Eigen::VectorXd energies;
  MatrixXcd vectors;
};

FiberSpectrum fiber_spectrum(const FiberOperator& fiber, int count = -1);

/** Table of the lowest `count` band functions over a list of k-points. */
std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> band_functions(
    const OperatorModel& model, const std::vector<Eigen::VectorXd>& k_points,
    const Eigen::VectorXi& cutoff, int count);

/** Orthogonal projection onto the span of the eigenvectors below `upper`;
 * errors out unless the rank is exactly n (threshold regime check). */
MatrixXcd spectral_projection(const FiberOperator& fiber, double upper);

/** Projection onto the constant (zero-frequency) n-component subspace. */
MatrixXcd constants_projection(const FrequencySet& freqs, int n);

/** Independent oracle for the threshold expansion: least-squares fit of the
 * lowest n eigenvalues along k = t*theta to gamma t^2 + mu t^3 + nu t^4
 * (+ rho t^5 when enough samples).  Branches are the sorted eigenvalues; for
 * clustered branches sorted order is stable for small t > 0, so the fitted
 * set per cluster is the cluster-block eigenvalue set. */
struct ThresholdFit {
  Eigen::VectorXd gamma, mu, nu;
  Eigen::VectorXd residual;  // per-branch relative fit residual
};

ThresholdFit extract_threshold_coeffs(const OperatorModel& model, const Eigen::VectorXd& theta,
                                      const std::vector<double>& t_samples,
                                      const Eigen::VectorXi& cutoff);

/** Default geometric fitting ladder: ratio 1.5 ending at t0. */
std::vector<double> default_t_ladder(const OperatorModel& model, int points = 8);

/** Max over the ladder of |F(t) - P|/t and |A F - t^2 S P|/t^3 (f = 1). */
struct ThresholdResidualReport {
  double projection_ratio = 0;
  double germ_ratio = 0;
};

ThresholdResidualReport threshold_residuals(const OperatorModel& model, const MatrixXcd& g0,
                                            const Eigen::VectorXd& theta,
                                            const std::vector<double>& t_samples,
                                            const Eigen::VectorXi& cutoff);

}  // namespace bh

#endif
