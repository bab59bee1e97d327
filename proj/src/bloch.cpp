#include "bh/bloch.hpp"

namespace bh {

MatrixXcd convolution_matrix(const PeriodicField& field, const FrequencySet& freqs) {
  const int r = field.rows(), c = field.cols();
  const int F = freqs.size();
  MatrixXcd out = MatrixXcd::Zero(static_cast<Eigen::Index>(r) * F, static_cast<Eigen::Index>(c) * F);
  for (int ci = 0; ci < F; ++ci)
    for (int bi = 0; bi < F; ++bi) {
      Eigen::VectorXi diff = freqs.member(ci) - freqs.member(bi);
      if (field.freqs().index_of(diff) < 0) continue;
      out.block(static_cast<Eigen::Index>(ci) * r, static_cast<Eigen::Index>(bi) * c, r, c) =
          field.fourier(diff);
    }
  return out;
}

FiberOperator assemble_fiber(const OperatorModel& model, const Eigen::VectorXd& k,
                             const Eigen::VectorXi& cutoff) {
  const int n = model.b.n(), m = model.b.m();
  if (cutoff.size() != model.lattice.dim || (cutoff.array() < 1).any())
    throw std::invalid_argument("fiber cutoff must be >= 1 per axis");
  FiberOperator fiber;
  fiber.k = k;
  fiber.freqs = FrequencySet(cutoff);
  const int F = fiber.freqs.size();

  // X = H * Bk * Fc with H, Fc convolutions and Bk block diagonal b(b + k)
  MatrixXcd BkF(static_cast<Eigen::Index>(m) * F, static_cast<Eigen::Index>(n) * F);
  if (model.f_is_identity) {
    BkF.setZero();
    for (int i = 0; i < F; ++i)
      BkF.block(static_cast<Eigen::Index>(i) * m, static_cast<Eigen::Index>(i) * n, m, n) =
          model.b.at(model.lattice.dual_vector(fiber.freqs.member(i)) + k);
  } else {
    MatrixXcd Fc = convolution_matrix(model.f, fiber.freqs);
    for (int i = 0; i < F; ++i)
      BkF.middleRows(static_cast<Eigen::Index>(i) * m, m) =
          model.b.at(model.lattice.dual_vector(fiber.freqs.member(i)) + k) *
          Fc.middleRows(static_cast<Eigen::Index>(i) * n, n);
  }
  MatrixXcd H = convolution_matrix(model.h, fiber.freqs);
  fiber.X = H * BkF;
  fiber.A = fiber.X.adjoint() * fiber.X;
  fiber.A = 0.5 * (fiber.A + fiber.A.adjoint());
  return fiber;
}

FiberOperator assemble_fiber(const OperatorModel& model, const Eigen::VectorXd& k, int K) {
  return assemble_fiber(model, k, Eigen::VectorXi::Constant(model.lattice.dim, K));
}

MatrixXcd effective_fiber(const OperatorModel& model, const MatrixXcd& g0,
                          const Eigen::VectorXd& k, const FrequencySet& freqs) {
  const int n = model.b.n();
  const int F = freqs.size();
  MatrixXcd A = MatrixXcd::Zero(static_cast<Eigen::Index>(n) * F, static_cast<Eigen::Index>(n) * F);
  for (int i = 0; i < F; ++i) {
    MatrixXcd bk = model.b.at(model.lattice.dual_vector(freqs.member(i)) + k);
    MatrixXcd block = model.f0 * bk.adjoint() * g0 * bk * model.f0;
    A.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(i) * n, n, n) =
        0.5 * (block + block.adjoint());
  }
  return A;
}

FiberSpectrum fiber_spectrum(const FiberOperator& fiber, int count) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(fiber.A);
  if (es.info() != Eigen::Success) throw std::runtime_error("fiber eigensolve failed");
  FiberSpectrum sp;
  if (count < 0 || count > es.eigenvalues().size()) count = static_cast<int>(es.eigenvalues().size());
  sp.energies = es.eigenvalues().head(count);
  sp.vectors = es.eigenvectors().leftCols(count);
  return sp;
}

std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> band_functions(
    const OperatorModel& model, const std::vector<Eigen::VectorXd>& k_points,
    const Eigen::VectorXi& cutoff, int count) {
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> table;
  table.reserve(k_points.size());
  for (const auto& k : k_points) {
    FiberOperator fiber = assemble_fiber(model, k, cutoff);
    table.emplace_back(k, fiber_spectrum(fiber, count).energies);
  }
  return table;
}

MatrixXcd spectral_projection(const FiberOperator& fiber, double upper) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(fiber.A);
  const int n = fiber.block_dim();
  int rank = 0;
  while (rank < es.eigenvalues().size() && es.eigenvalues()[rank] < upper) ++rank;
  if (rank != n)
    throw std::runtime_error("spectral projection rank " + std::to_string(rank) +
                             " != n (k outside the threshold regime)");
  MatrixXcd V = es.eigenvectors().leftCols(rank);
  return V * V.adjoint();
}

MatrixXcd constants_projection(const FrequencySet& freqs, int n) {
  const int F = freqs.size();
  MatrixXcd P = MatrixXcd::Zero(static_cast<Eigen::Index>(n) * F, static_cast<Eigen::Index>(n) * F);
  int z = freqs.zero_index();
  P.block(static_cast<Eigen::Index>(z) * n, static_cast<Eigen::Index>(z) * n, n, n) =
      MatrixXcd::Identity(n, n);
  return P;
}

std::vector<double> default_t_ladder(const OperatorModel& model, int points) {
  ThresholdParams tp = threshold_params(model);
  double top = model.f_is_identity ? tp.t0_hat : tp.t0;
  // ratio 1.5 balances cubic-coefficient leverage against eigensolver noise
  // at the small end of the ladder
  std::vector<double> ladder(points);
  for (int j = 0; j < points; ++j) ladder[j] = top / std::pow(1.5, points - 1 - j);
  return ladder;
}

ThresholdFit extract_threshold_coeffs(const OperatorModel& model, const Eigen::VectorXd& theta,
                                      const std::vector<double>& t_samples,
                                      const Eigen::VectorXi& cutoff) {
  const int n = model.b.n();
  const int S = static_cast<int>(t_samples.size());
  if (S < 4) throw std::invalid_argument("threshold fit needs at least 4 t-samples");
  Eigen::MatrixXd lam(S, n);
  for (int s = 0; s < S; ++s) {
    FiberOperator fiber = assemble_fiber(model, t_samples[s] * theta, cutoff);
    lam.row(s) = fiber_spectrum(fiber, n).energies.transpose();
  }
  const int terms = (S >= 5) ? 4 : 3;  // powers t^2 .. t^(terms+1)
  const double tmax = *std::max_element(t_samples.begin(), t_samples.end());
  Eigen::MatrixXd V(S, terms);
  for (int s = 0; s < S; ++s)
    for (int p = 0; p < terms; ++p) V(s, p) = std::pow(t_samples[s] / tmax, p + 2);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
  ThresholdFit fit;
  fit.gamma.resize(n);
  fit.mu.resize(n);
  fit.nu.resize(n);
  fit.residual.resize(n);
  for (int l = 0; l < n; ++l) {
    Eigen::VectorXd y = lam.col(l);
    Eigen::VectorXd coef = qr.solve(y);
    fit.gamma[l] = coef[0] / (tmax * tmax);
    fit.mu[l] = coef[1] / (tmax * tmax * tmax);
    fit.nu[l] = coef[2] / std::pow(tmax, 4);
    fit.residual[l] = (V * coef - y).norm() / std::max(y.norm(), 1e-300);
  }
  return fit;
}

ThresholdResidualReport threshold_residuals(const OperatorModel& model, const MatrixXcd& g0,
                                            const Eigen::VectorXd& theta,
                                            const std::vector<double>& t_samples,
                                            const Eigen::VectorXi& cutoff) {
  if (!model.f_is_identity)
    throw std::invalid_argument("threshold residuals are defined for f = identity");
  ThresholdParams tp = threshold_params(model);
  const int n = model.b.n();
  ThresholdResidualReport rep;
  MatrixXcd S_theta = germ_matrix(g0, model.b, theta);
  for (double t : t_samples) {
    FiberOperator fiber = assemble_fiber(model, t * theta, cutoff);
    MatrixXcd F = spectral_projection(fiber, tp.delta_hat);
    MatrixXcd P = constants_projection(fiber.freqs, n);
    rep.projection_ratio = std::max(rep.projection_ratio, (F - P).operatorNorm() / t);
    MatrixXcd SP = MatrixXcd::Zero(P.rows(), P.cols());
    int z = fiber.freqs.zero_index();
    SP.block(static_cast<Eigen::Index>(z) * n, static_cast<Eigen::Index>(z) * n, n, n) = S_theta;
    rep.germ_ratio =
        std::max(rep.germ_ratio, (fiber.A * F - t * t * SP).operatorNorm() / (t * t * t));
  }
  return rep;
}

}  // namespace bh
