#include "bh/germ.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace bh {

MatrixXcd germ_matrix(const MatrixXcd& g0, const MatrixSymbol& b, const Eigen::VectorXd& theta) {
  MatrixXcd bt = b.at(theta);
  MatrixXcd S = bt.adjoint() * g0 * bt;
  return 0.5 * (S + S.adjoint());
}

GermData germ_eigen(const MatrixXcd& S_hat, const MatrixXcd& Q_bar,
                    const Eigen::VectorXd& theta, double cluster_tol) {
  GermData out;
  out.theta = theta;
  out.S_hat = S_hat;
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXcd> es(S_hat, Q_bar);
  if (es.info() != Eigen::Success) throw std::runtime_error("germ eigenproblem failed");
  out.gamma = es.eigenvalues();
  out.vectors = es.eigenvectors();  // Q_bar-orthonormal columns
  const int n = static_cast<int>(out.gamma.size());
  const double scale = std::max(out.gamma.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<int> current{0};
  for (int i = 1; i < n; ++i) {
    if (out.gamma[i] - out.gamma[i - 1] <= cluster_tol * scale) {
      current.push_back(i);
    } else {
      out.clusters.push_back(current);
      current = {i};
    }
  }
  out.clusters.push_back(current);
  return out;
}

MatrixXcd L_matrix(const PeriodicField& Lambda, const PeriodicField& g_tilde,
                   const MatrixSymbol& b, const Eigen::VectorXd& theta) {
  // cell mean of Lambda* b(theta)* g_tilde + adjoint, paired in Fourier space
  // (exact: g_tilde's dictionary covers the corrector bandwidth)
  const int m = b.m();
  MatrixXcd bt = b.at(theta);
  MatrixXcd first = MatrixXcd::Zero(m, m);
  const FrequencySet& fs = Lambda.freqs();
  for (int i = 0; i < fs.size(); ++i)
    first += Lambda.fourier_at(i).adjoint() * bt.adjoint() * g_tilde.fourier(fs.member(i));
  MatrixXcd L = first + first.adjoint();
  return 0.5 * (L + L.adjoint());
}

MatrixXcd N_hat_matrix(const MatrixXcd& L, const MatrixSymbol& b, const Eigen::VectorXd& theta) {
  MatrixXcd bt = b.at(theta);
  MatrixXcd N = bt.adjoint() * L * bt;
  return 0.5 * (N + N.adjoint());
}

CorrectorData split_N(const MatrixXcd& N_hat, const GermData& germ, const MatrixXcd& Q_bar,
                      const MatrixXcd& L, double cluster_tol) {
  CorrectorData out;
  out.L = L;
  out.N_hat = N_hat;
  const MatrixXcd& Z = germ.vectors;
  MatrixXcd M = Z.adjoint() * N_hat * Z;
  MatrixXcd M0 = MatrixXcd::Zero(M.rows(), M.cols());
  for (const auto& cluster : germ.clusters)
    for (int a : cluster)
      for (int b : cluster) M0(a, b) = M(a, b);
  out.N0 = Q_bar * Z * M0 * Z.adjoint() * Q_bar;
  out.N0 = 0.5 * (out.N0 + out.N0.adjoint());
  out.Nstar = N_hat - out.N0;
  out.mu = M.diagonal().real();

  const double scale = std::max(germ.gamma.cwiseAbs().maxCoeff(), 1e-300);
  for (size_t j = 0; j + 1 < germ.clusters.size(); ++j) {
    double gap = germ.gamma[germ.clusters[j + 1].front()] - germ.gamma[germ.clusters[j].back()];
    if (gap <= 10.0 * cluster_tol * scale) out.cluster_ambiguous = true;
  }
  return out;
}

CorrectorData corrector_data(const OperatorModel& model, const EffectiveData& eff,
                             const GermData& germ) {
  const PeriodicField& Lam = model.f_is_identity ? eff.Lambda : eff.Lambda_Q;
  MatrixXcd L = L_matrix(Lam, eff.g_tilde, model.b, germ.theta);
  MatrixXcd N = N_hat_matrix(L, model.b, germ.theta);
  return split_N(N, germ, model.Q_bar, L);
}

double CubicPolynomial::max_coeff_norm() const {
  double m = 0;
  for (const auto& c : coeff) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

MatrixXcd CubicPolynomial::eval(const Eigen::VectorXd& k) const {
  MatrixXcd out = MatrixXcd::Zero(coeff[0].rows(), coeff[0].cols());
  for (size_t i = 0; i < monomials.size(); ++i) {
    auto [a, b, c] = monomials[i];
    out += coeff[i] * (k[a] * k[b] * k[c]);
  }
  return out;
}

CubicPolynomial N_polynomial(const OperatorModel& model, const EffectiveData& eff) {
  const int d = model.lattice.dim;
  const PeriodicField& Lam = model.f_is_identity ? eff.Lambda : eff.Lambda_Q;
  std::vector<MatrixXcd> L_axis(d);
  for (int l = 0; l < d; ++l) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[l] = 1.0;
    L_axis[l] = L_matrix(Lam, eff.g_tilde, model.b, e);
  }
  CubicPolynomial poly;
  poly.dim = d;
  const int n = model.b.n();
  // N(k) = b(k)* L(k) b(k) is a cubic form; accumulate the raw tensor
  // b_a* L_b b_c into the sorted monomial k_{a'} k_{b'} k_{c'}
  std::map<std::tuple<int, int, int>, MatrixXcd> acc;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        std::array<int, 3> idx{a, b, c};
        std::sort(idx.begin(), idx.end());
        std::tuple<int, int, int> key{idx[0], idx[1], idx[2]};
        MatrixXcd term = model.b.coeff[a].adjoint() * L_axis[b] * model.b.coeff[c];
        auto it = acc.find(key);
        if (it == acc.end())
          acc.emplace(key, term);
        else
          it->second += term;
      }
  for (auto& [key, value] : acc) {
    poly.monomials.push_back(key);
    poly.coeff.push_back(0.5 * (value + value.adjoint()));
  }
  (void)n;
  return poly;
}

ConditionReport condition_check(const OperatorModel& model, const EffectiveData& eff,
                                int n_theta, double cluster_tol, double zero_tol) {
  const int d = model.lattice.dim;
  const int n = model.b.n();
  if (n_theta <= 0) n_theta = (d == 1) ? 2 : (d == 2 ? 180 : 512);
  ConditionReport rep;

  CubicPolynomial poly = N_polynomial(model, eff);
  rep.N_identically_zero = poly.max_coeff_norm() <= zero_tol;

  auto dirs = sphere_directions(d, n_theta);
  rep.sweep.reserve(dirs.size());
  rep.sweep_correctors.reserve(dirs.size());
  // per-pair extremes over the sweep
  Eigen::MatrixXd min_gap = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
  Eigen::MatrixXd max_block = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::vector<int>> first_sizes;
  bool sizes_constant = true;

  for (const auto& theta : dirs) {
    MatrixXcd S = germ_matrix(eff.g0, model.b, theta);
    GermData germ = germ_eigen(S, model.Q_bar, theta, cluster_tol);
    CorrectorData corr = corrector_data(model, eff, germ);
    rep.max_N_norm = std::max(rep.max_N_norm, corr.N_hat.cwiseAbs().maxCoeff());
    rep.max_N0_norm = std::max(rep.max_N0_norm, corr.N0.cwiseAbs().maxCoeff());

    // cluster label per index and skew cluster projections
    std::vector<int> label(n);
    std::vector<MatrixXcd> proj(germ.clusters.size());
    for (size_t j = 0; j < germ.clusters.size(); ++j) {
      MatrixXcd Zj(n, germ.clusters[j].size());
      for (size_t c = 0; c < germ.clusters[j].size(); ++c) {
        label[germ.clusters[j][c]] = static_cast<int>(j);
        Zj.col(c) = germ.vectors.col(germ.clusters[j][c]);
      }
      proj[j] = Zj * Zj.adjoint() * model.Q_bar;
    }
    for (int k = 0; k < n; ++k)
      for (int r = k + 1; r < n; ++r) {
        min_gap(k, r) = std::min(min_gap(k, r), std::abs(germ.gamma[k] - germ.gamma[r]));
        MatrixXcd block = proj[label[k]].adjoint() * corr.N_hat * proj[label[r]];
        max_block(k, r) = std::max(max_block(k, r), block.cwiseAbs().maxCoeff());
      }

    std::vector<int> sizes;
    for (const auto& cl : germ.clusters) sizes.push_back(static_cast<int>(cl.size()));
    if (first_sizes.empty())
      first_sizes.push_back(sizes);
    else if (sizes != first_sizes.front())
      sizes_constant = false;

    rep.sweep.push_back(std::move(germ));
    rep.sweep_correctors.push_back(std::move(corr));
  }

  rep.N0_identically_zero = rep.max_N0_norm <= zero_tol;

  const double gamma_scale = [&] {
    double s = 0;
    for (const auto& g : rep.sweep) s = std::max(s, g.gamma.cwiseAbs().maxCoeff());
    return std::max(s, 1e-300);
  }();
  const double cross_tol = 10.0 * cluster_tol * gamma_scale;

  ThresholdParams tp = threshold_params(model);
  const double c_star = model.f_is_identity ? tp.c_star_hat : tp.c_star;
  double c_circ = c_star;
  bool crossing_blocks_zero = true;
  for (int k = 0; k < n; ++k)
    for (int r = k + 1; r < n; ++r) {
      bool crosses = min_gap(k, r) <= cross_tol;
      bool block_nonzero = max_block(k, r) > zero_tol;
      if (crosses) rep.crossing_pairs.emplace_back(k, r);
      if (block_nonzero) {
        rep.nonzero_block_pairs.emplace_back(k, r);
        c_circ = std::min(c_circ, std::min(c_star, min_gap(k, r) / n));
      }
      if (crosses && block_nonzero) crossing_blocks_zero = false;
    }
  rep.condition_A = rep.N0_identically_zero && crossing_blocks_zero;
  rep.condition_B = rep.N0_identically_zero && sizes_constant;
  rep.c_circ = c_circ;
  // threshold radius carrying c_circ; the absolute constant in front is not
  // pinned down numerically, so this value is "up to an absolute constant"
  double t_circ = 0.125 * model.lattice.r0 * std::pow(model.alpha1, -1.5) *
                  std::sqrt(model.alpha0) * std::pow(model.g_norm, -1.5) /
                  std::sqrt(model.g_inv_norm) * c_circ;
  if (!model.f_is_identity)
    t_circ /= std::pow(model.f_norm, 3) * model.f_inv_norm;
  rep.t_circ = t_circ;
  return rep;
}

}  // namespace bh
