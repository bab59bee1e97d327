#include "bh/effective.hpp"

namespace bh {

namespace {

// Unknown layout for the cell solve: all nonzero frequencies of the cutoff
// box in their deterministic order, n components each.
struct CellSpace {
  FrequencySet freqs;
  std::vector<int> nonzero;  // frequency indices excluding kappa = 0
  int n = 0;

  int dof() const { return static_cast<int>(nonzero.size()) * n; }
};

CellSpace make_space(const OperatorModel& model, const Eigen::VectorXi& cutoff) {
  CellSpace sp;
  sp.freqs = FrequencySet(cutoff);
  sp.n = model.b.n();
  sp.nonzero.reserve(sp.freqs.size() - 1);
  for (int i = 0; i < sp.freqs.size(); ++i)
    if (i != sp.freqs.zero_index()) sp.nonzero.push_back(i);
  return sp;
}

}  // namespace

PeriodicField solve_cell_problem(const OperatorModel& model, const Eigen::VectorXi& cutoff,
                                 double* residual, double* condition) {
  const int n = model.b.n(), m = model.b.m();
  CellSpace sp = make_space(model, cutoff);
  const int F = static_cast<int>(sp.nonzero.size());
  const int dof = sp.dof();

  std::vector<MatrixXcd> sym(F);  // b evaluated at each nonzero frequency
  for (int i = 0; i < F; ++i)
    sym[i] = model.b.at(model.lattice.dual_vector(sp.freqs.member(sp.nonzero[i])));

  MatrixXcd M(dof, dof);
  for (int ci = 0; ci < F; ++ci) {
    for (int bi = 0; bi < F; ++bi) {
      Eigen::VectorXi diff = sp.freqs.member(sp.nonzero[ci]) - sp.freqs.member(sp.nonzero[bi]);
      M.block(ci * n, bi * n, n, n) = sym[ci].adjoint() * model.g.fourier(diff) * sym[bi];
    }
  }
  MatrixXcd rhs(dof, m);
  for (int ci = 0; ci < F; ++ci)
    rhs.middleRows(ci * n, n) =
        -sym[ci].adjoint() * model.g.fourier(sp.freqs.member(sp.nonzero[ci]));

  Eigen::LDLT<MatrixXcd> ldlt(0.5 * (M + M.adjoint()));
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("cell problem factorization failed");
  MatrixXcd x = ldlt.solve(rhs);

  if (residual) {
    double num = (M * x - rhs).norm();
    double den = std::max(rhs.norm(), 1e-300);
    *residual = num / den;
  }
  if (condition) {
    Eigen::VectorXd dvec = ldlt.vectorD().real().cwiseAbs();
    *condition = dvec.maxCoeff() / std::max(dvec.minCoeff(), 1e-300);
  }

  std::vector<std::pair<Eigen::VectorXi, MatrixXcd>> coeffs;
  coeffs.reserve(F);
  for (int i = 0; i < F; ++i)
    coeffs.emplace_back(sp.freqs.member(sp.nonzero[i]), x.middleRows(i * n, n));
  Eigen::VectorXi grid = model.g.grid_shape();
  for (int ax = 0; ax < grid.size(); ++ax)
    grid[ax] = std::max(grid[ax], 2 * cutoff[ax] + 2);
  return PeriodicField::from_fourier(n, m, grid, coeffs);
}

PeriodicField solve_cell_problem(const OperatorModel& model, int K,
                                 double* residual, double* condition) {
  return solve_cell_problem(model, Eigen::VectorXi::Constant(model.lattice.dim, K),
                            residual, condition);
}

std::pair<PeriodicField, MatrixXcd> effective_matrix(const OperatorModel& model,
                                                     const PeriodicField& Lambda) {
  const int m = model.b.m();
  // b(D)Lambda + 1_m from the corrector's spectrum
  std::vector<std::pair<Eigen::VectorXi, MatrixXcd>> coeffs;
  const FrequencySet& fs = Lambda.freqs();
  for (int i = 0; i < fs.size(); ++i) {
    MatrixXcd c = model.b.at(model.lattice.dual_vector(fs.member(i))) * Lambda.fourier_at(i);
    if (i == fs.zero_index()) c += MatrixXcd::Identity(m, m);
    coeffs.emplace_back(fs.member(i), c);
  }
  PeriodicField gradient = PeriodicField::from_fourier(m, m, Lambda.grid_shape(), coeffs);
  PeriodicField g_tilde = model.g.multiply(gradient);
  MatrixXcd g0_raw = g_tilde.mean();
  MatrixXcd g0 = 0.5 * (g0_raw + g0_raw.adjoint());
  double skew = (g0_raw - g0_raw.adjoint()).norm();
  if (skew > 1e-10 * std::max(1.0, g0.norm()))
    throw std::runtime_error("effective matrix has a non-negligible skew part: " +
                             std::to_string(skew));
  return {g_tilde, g0};
}

EffectiveData compute_effective(const OperatorModel& model, const Eigen::VectorXi& cutoff) {
  EffectiveData eff;
  eff.Lambda = solve_cell_problem(model, cutoff, &eff.cell_residual, &eff.condition_estimate);
  std::tie(eff.g_tilde, eff.g0) = effective_matrix(model, eff.Lambda);
  std::tie(eff.Lambda_Q, eff.Lambda_Q0) = solve_cell_problem_Q(model, eff.Lambda);
  eff.f0 = model.f0;

  // residual of the flux against every truncated test frequency
  double worst = 0.0;
  const FrequencySet& fs = eff.Lambda.freqs();
  for (int i = 0; i < fs.size(); ++i) {
    if (i == fs.zero_index()) continue;
    MatrixXcd r = model.b.at(model.lattice.dual_vector(fs.member(i))).adjoint() *
                  eff.g_tilde.fourier(fs.member(i));
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  eff.weak_form_residual = worst / std::max(1.0, eff.g0.norm());
  return eff;
}

EffectiveData compute_effective(const OperatorModel& model, int K) {
  return compute_effective(model, Eigen::VectorXi::Constant(model.lattice.dim, K));
}

VoigtReussReport voigt_reuss_check(const MatrixXcd& g0, const PeriodicField& g, double tol) {
  VoigtReussReport rep;
  rep.g_upper = g.mean();
  rep.g_lower = g.harmonic_mean();
  auto min_eig = [](const MatrixXcd& a) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  };
  rep.min_eig_upper_gap = min_eig(rep.g_upper - g0);
  rep.min_eig_lower_gap = min_eig(g0 - rep.g_lower);
  rep.equality_defect_lower = (g0 - rep.g_lower).norm();
  rep.ok = rep.min_eig_upper_gap >= -tol && rep.min_eig_lower_gap >= -tol;
  return rep;
}

DegenerateCases classify_degenerate_cases(const OperatorModel& model, double tol) {
  DegenerateCases out;
  // upper: b(D)* applied to every column of g vanishes
  {
    double num2 = 0.0, scale2 = 0.0;
    const FrequencySet& fs = model.g.freqs();
    for (int i = 0; i < fs.size(); ++i) {
      if (i == fs.zero_index()) continue;
      const MatrixXcd& gc = model.g.fourier_at(i);
      num2 += (model.b.at(model.lattice.dual_vector(fs.member(i))).adjoint() * gc).squaredNorm();
      scale2 += gc.squaredNorm();
    }
    double scale = std::max(std::sqrt(scale2) * std::sqrt(std::max(model.alpha1, 1.0)), 1.0);
    out.upper_defect = std::sqrt(num2) / scale;
    out.g0_equals_upper = out.upper_defect <= tol;
  }
  // lower: every column of g^{-1} is a constant plus b(D) of a potential,
  // checked per frequency by least squares against the range of b
  {
    PeriodicField ginv = model.g.inverse();
    double num2 = 0.0, scale2 = 0.0;
    const FrequencySet& fs = ginv.freqs();
    for (int i = 0; i < fs.size(); ++i) {
      if (i == fs.zero_index()) continue;
      const MatrixXcd& lc = ginv.fourier_at(i);
      MatrixXcd bc = model.b.at(model.lattice.dual_vector(fs.member(i)));
      MatrixXcd w = bc.completeOrthogonalDecomposition().solve(lc);
      num2 += (bc * w - lc).squaredNorm();
      scale2 += lc.squaredNorm();
    }
    out.lower_defect = std::sqrt(num2) / std::max(std::sqrt(scale2), 1.0);
    out.g0_equals_lower = out.lower_defect <= tol;
  }
  return out;
}

std::pair<PeriodicField, MatrixXcd> solve_cell_problem_Q(const OperatorModel& model,
                                                         const PeriodicField& Lambda) {
  MatrixXcd meanQL = model.Q.multiply(Lambda).mean();
  MatrixXcd shift = -model.Q_bar.inverse() * meanQL;
  PeriodicField Lambda_Q =
      Lambda.add(PeriodicField::constant(shift, Lambda.grid_shape()));
  return {Lambda_Q, shift};
}

}  // namespace bh
