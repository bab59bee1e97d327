// Acceptance gate: ten end-to-end criteria, one verdict line each.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "bh/gallery.hpp"
#include "bh/germ.hpp"
#include "bh/propagate.hpp"

using namespace bh;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

int g_failures = 0;

void verdict(int index, const char* what, bool ok, double seconds, const std::string& detail) {
  std::printf("criterion %2d %-42s %s  (%.1f s)%s%s\n", index, what, ok ? "PASS" : "FAIL",
              seconds, detail.empty() ? "" : "  ", detail.c_str());
  if (!ok) ++g_failures;
}

Eigen::VectorXd dir2(double a, double b) {
  Eigen::VectorXd t(2);
  t << a, b;
  return t.normalized();
}

Eigen::VectorXi cut2(int a, int b) {
  Eigen::VectorXi c(2);
  c << a, b;
  return c;
}

std::string fmt(const char* pattern, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// ---- criterion 1: effective-matrix exactness ------------------------------

void criterion_1() {
  Timer timer;
  GalleryEntry layered = example_8_7();
  EffectiveData eff = compute_effective(layered.model, layered.cell_cutoff);
  MatrixXcd expected = MatrixXcd::Zero(3, 3);
  expected(0, 0) = 1.0;
  expected(1, 1) = 4.0;
  expected(2, 2) = 1.0;
  double dev_layered = (eff.g0 - expected).cwiseAbs().maxCoeff();
  double t_layered = timer.seconds();

  Timer timer1;
  GalleryEntry scalar = make_gallery("scalar_1d");
  EffectiveData eff1 = compute_effective(scalar.model, scalar.cell_cutoff);
  double dev_scalar = std::abs(eff1.g0(0, 0).real() - std::sqrt(3.0));
  double t_scalar = timer1.seconds();

  bool ok = dev_layered <= 1e-8 && dev_scalar <= 1e-8 && t_layered < 1.0 && t_scalar < 1.0;
  verdict(1, "effective-matrix exactness", ok, timer.seconds(),
          fmt("max dev %.2e", std::max(dev_layered, dev_scalar)));
}

// ---- criterion 2: Voigt-Reuss suite ---------------------------------------

PeriodicField random_psd_field(int m, int d, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXi grid = Eigen::VectorXi::Constant(d, 16);
  FrequencySet fs(Eigen::VectorXi::Constant(d, 1));
  std::vector<std::pair<Eigen::VectorXi, MatrixXcd>> coeffs;
  for (int i = 0; i < fs.size(); ++i) {
    MatrixXcd c(m, m);
    for (int r = 0; r < m; ++r)
      for (int s = 0; s < m; ++s) c(r, s) = cdouble(u(rng), u(rng)) * 0.2;
    coeffs.emplace_back(fs.member(i), c);
  }
  PeriodicField a = PeriodicField::from_fourier(m, m, grid, coeffs);
  PeriodicField sq = a.adjoint().multiply(a);
  return sq.add(PeriodicField::constant(MatrixXcd::Identity(m, m), sq.grid_shape()));
}

MatrixSymbol random_symbol(int m, int n, int d, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    MatrixSymbol b;
    for (int l = 0; l < d; ++l) {
      MatrixXcd c(m, n);
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < n; ++s) c(r, s) = cdouble(u(rng), u(rng));
      b.coeff.push_back(c);
    }
    if (alpha_bounds(b, 256).first > 0.05) return b;
  }
}

void criterion_2() {
  Timer timer;
  std::mt19937 rng(271828);
  // (d, n, m) shapes cycling through the allowed ranges d<=2, n<=2, m<=3
  const int shapes[][3] = {{1, 1, 1}, {1, 1, 2}, {1, 1, 3}, {1, 2, 2}, {1, 2, 3},
                           {2, 1, 1}, {2, 1, 2}, {2, 1, 3}, {2, 2, 2}, {2, 2, 3}};
  bool ok = true;
  double worst_gap = 0, worst_eq = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto& sh = shapes[trial % 10];
    const int d = sh[0], n = sh[1], m = sh[2];
    MatrixSymbol b = random_symbol(m, n, d, rng);
    PeriodicField g = random_psd_field(m, d, rng);
    Lattice lat = Lattice::from_basis(2.0 * kPi * Eigen::MatrixXd::Identity(d, d));
    OperatorModel model = OperatorModel::build(lat, b, g);
    if (!validate(model).ok) {
      ok = false;
      continue;
    }
    EffectiveData eff = compute_effective(model, d == 1 ? 16 : 12);
    // quadrature for the harmonic mean: resample the band-limited g to a fine
    // grid, so the aliasing of mean(g^{-1}) stays below the 1e-9 gate
    PeriodicField g_fine = model.g.resample(Eigen::VectorXi::Constant(d, d == 1 ? 256 : 64));
    VoigtReussReport vr = voigt_reuss_check(eff.g0, g_fine);
    worst_gap = std::min(worst_gap, std::min(vr.min_eig_upper_gap, vr.min_eig_lower_gap));
    if (vr.min_eig_upper_gap < -1e-9 || vr.min_eig_lower_gap < -1e-9) ok = false;
    if (m == n) {
      worst_eq = std::max(worst_eq, vr.equality_defect_lower);
      if (vr.equality_defect_lower > 1e-9) ok = false;
    }
  }
  ok = ok && timer.seconds() < 30.0;
  verdict(2, "Voigt-Reuss bracketing (20 random models)", ok, timer.seconds(),
          fmt("worst gap %.1e", worst_gap) + fmt(", m=n defect %.1e", worst_eq));
}

// ---- criterion 3: germ vs band-fit oracle ---------------------------------

/** Per-direction germ reference: gamma ascending; mu per branch with each
 * cluster block diagonalized in ascending order (matching the ordering of the
 * sorted band-fit branches for small t > 0). */
void germ_reference(const OperatorModel& model, const EffectiveData& eff,
                    const Eigen::VectorXd& theta, Eigen::VectorXd& gamma,
                    Eigen::VectorXd& mu) {
  GermData germ = germ_eigen(germ_matrix(eff.g0, model.b, theta), model.Q_bar, theta);
  CorrectorData cd = corrector_data(model, eff, germ);
  gamma = germ.gamma;
  mu.resize(gamma.size());
  for (const auto& cluster : germ.clusters) {
    const int c = static_cast<int>(cluster.size());
    MatrixXcd Z(germ.vectors.rows(), c);
    for (int j = 0; j < c; ++j) Z.col(j) = germ.vectors.col(cluster[j]);
    MatrixXcd block = Z.adjoint() * cd.N_hat * Z;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (block + block.adjoint()),
                                                Eigen::EigenvaluesOnly);
    for (int j = 0; j < c; ++j) mu[cluster[j]] = es.eigenvalues()[j];
  }
}

void criterion_3() {
  Timer timer;
  bool ok = true;
  double worst_gamma = 0, worst_mu = 0;
  bool cluster_seen = false;

  for (int which = 0; which < 2; ++which) {
    GalleryEntry e = which == 0 ? example_8_7() : example_15_1(0.2);
    EffectiveData eff = compute_effective(e.model, e.cell_cutoff);
    // ladder scale calibrated per model: it balances the higher-order band
    // contamination (pushes the ladder down) against fit conditioning
    std::vector<double> ladder = default_t_ladder(e.model);
    for (double& t : ladder) t *= (which == 0 ? 0.5 : 0.35);
    Eigen::VectorXi cut = cut2(16, 2);  // coefficients vary in x1 only
    for (int j = 0; j < 16; ++j) {
      // start at pi/2 so the sweep hits theta = (0,1) and the other axes
      double ang = 0.5 * kPi + 2.0 * kPi * j / 16.0;
      Eigen::VectorXd theta = dir2(std::cos(ang), std::sin(ang));
      Eigen::VectorXd gamma_ref, mu_ref;
      germ_reference(e.model, eff, theta, gamma_ref, mu_ref);
      ThresholdFit fit = extract_threshold_coeffs(e.model, theta, ladder, cut);
      for (int l = 0; l < gamma_ref.size(); ++l) {
        worst_gamma = std::max(worst_gamma, std::abs(fit.gamma[l] - gamma_ref[l]));
        worst_mu = std::max(worst_mu, std::abs(fit.mu[l] - mu_ref[l]));
      }
      if (which == 0 && j == 0) {
        // theta = (0,1): the cluster carries mu = -1/8, +1/8
        cluster_seen = std::abs(mu_ref[0] + 0.125) <= 1e-9 &&
                       std::abs(mu_ref[1] - 0.125) <= 1e-9;
      }
    }
  }
  ok = worst_gamma <= 1e-6 && worst_mu <= 1e-5 && cluster_seen && timer.seconds() < 120.0;
  verdict(3, "germ vs band-fit oracle (16 directions)", ok, timer.seconds(),
          fmt("gamma dev %.1e", worst_gamma) + fmt(", mu dev %.1e", worst_mu));
}

// ---- criterion 4: vanishing certificates ----------------------------------

void criterion_4() {
  Timer timer;
  GalleryEntry scalar = make_gallery("scalar_1d");
  EffectiveData eff1 = compute_effective(scalar.model, scalar.cell_cutoff);
  double real_scalar_norm = N_polynomial(scalar.model, eff1).max_coeff_norm();

  // square case m = n: randomized model, same ensemble as criterion 2
  std::mt19937 rng(314159);
  MatrixSymbol b = random_symbol(2, 2, 2, rng);
  PeriodicField g = random_psd_field(2, 2, rng);
  Lattice lat = Lattice::from_basis(2.0 * kPi * Eigen::MatrixXd::Identity(2, 2));
  OperatorModel square = OperatorModel::build(lat, b, g);
  EffectiveData eff2 = compute_effective(square, 12);
  double square_norm = N_polynomial(square, eff2).max_coeff_norm();

  GalleryEntry schro = make_gallery("schrodinger_factorized");
  EffectiveData eff3 = compute_effective(schro.model, schro.cell_cutoff);
  double weighted_norm = N_polynomial(schro.model, eff3).max_coeff_norm();

  double worst = std::max({real_scalar_norm, square_norm, weighted_norm});
  bool ok = worst <= 1e-10 && timer.seconds() < 30.0;
  verdict(4, "vanishing certificates", ok, timer.seconds(), fmt("max |N| coeff %.1e", worst));
}

// ---- criteria 5 and 6: rate reproduction ----------------------------------

void criterion_5() {
  Timer timer;
  std::vector<double> eps = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
  std::string detail;
  bool ok = true;

  {
    GalleryEntry e = make_gallery("scalar_1d");
    EffectiveData eff = compute_effective(e.model, e.cell_cutoff);
    SweepOptions opts;
    opts.N_k = 32;
    opts.eps_ladder = eps;
    ErrorSweep sw = error_sweep(e.model, eff, Eigen::VectorXi::Constant(1, 8), 1.0, 3.0, opts);
    ok = ok && sw.fit.slope >= 0.85 && sw.fit.slope <= 1.15;
    detail += fmt("1d %.3f", sw.fit.slope);
  }
  {
    GalleryEntry e = example_15_1(0.2);
    EffectiveData eff = compute_effective(e.model, e.cell_cutoff);
    SweepOptions opts;
    opts.N_k = 32;
    opts.eps_ladder = eps;
    ErrorSweep sw = error_sweep(e.model, eff, cut2(8, 2), 1.0, 3.0, opts);
    ok = ok && sw.fit.slope >= 0.85 && sw.fit.slope <= 1.15;
    detail += fmt(", complex-weight %.3f", sw.fit.slope);
  }
  {
    GalleryEntry e = pauli_example_16_2();
    EffectiveData eff = compute_effective(e.model, e.cell_cutoff);
    SweepOptions opts;
    opts.N_k = 16;
    opts.eps_ladder = eps;
    ErrorSweep sw = error_sweep(e.model, eff, cut2(2, 8), 1.0, 3.0, opts, /*sandwiched=*/true);
    ok = ok && sw.fit.slope >= 0.85 && sw.fit.slope <= 1.15;
    detail += fmt(", spin %.3f", sw.fit.slope);
  }
  ok = ok && timer.seconds() < 300.0;
  verdict(5, "O(eps) rates at s=3 (three models)", ok, timer.seconds(), detail);
}

void criterion_6() {
  Timer timer;
  GalleryEntry e = make_gallery("scalar_1d");
  EffectiveData eff = compute_effective(e.model, e.cell_cutoff);
  SweepOptions opts;
  opts.N_k = 32;
  opts.eps_ladder = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
  // tau = 4 keeps the extremal |k| of every ladder point inside the dual
  // cell, so the whole ladder sits in the asymptotic O(eps) regime
  ErrorSweep sw = error_sweep(e.model, eff, Eigen::VectorXi::Constant(1, 8), 4.0, 2.0, opts);
  bool ok = sw.fit.slope >= 0.85 && sw.fit.slope <= 1.15 && timer.seconds() < 60.0;
  verdict(6, "enhanced regime s=2 (1d real weight)", ok, timer.seconds(),
          fmt("slope %.3f", sw.fit.slope));
}

// ---- criterion 7: sharpness -----------------------------------------------

void criterion_7() {
  Timer timer;
  GalleryEntry e = example_15_1(0.2);
  EffectiveData eff = compute_effective(e.model, e.cell_cutoff);
  Eigen::VectorXd theta0 = dir2(0, 1);
  Eigen::VectorXd gamma_ref, mu_ref;
  germ_reference(e.model, eff, theta0, gamma_ref, mu_ref);
  std::vector<double> eps;
  for (int j = 9; j <= 14; ++j) eps.push_back(std::pow(2.0, -j));
  Eigen::VectorXi cut = cut2(8, 2);

  SharpnessReport s2 = sharpness_probe(e.model, eff, theta0, mu_ref[0], 1.0, 2.0, eps, cut);
  SharpnessReport s3 = sharpness_probe(e.model, eff, theta0, mu_ref[0], 1.0, 3.0, eps, cut);
  bool ok = std::abs(s2.fit.slope + 1.0 / 3.0) <= 0.1 && std::abs(s3.fit.slope) <= 0.1 &&
            timer.seconds() < 60.0;
  verdict(7, "sharpness exponents (s=2, s=3)", ok, timer.seconds(),
          fmt("s=2: %.3f", s2.fit.slope) + fmt(", s=3: %.3f", s3.fit.slope));
}

// ---- criterion 8: Cauchy rates --------------------------------------------

void criterion_8() {
  Timer timer;
  GalleryEntry e = make_gallery("scalar_1d");
  EffectiveData eff = compute_effective(e.model, e.cell_cutoff);
  SweepOptions opts;
  opts.N_k = 32;
  opts.eps_ladder = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
  Eigen::VectorXi cut = Eigen::VectorXi::Constant(1, 8);
  CauchyErrorReport r3 = cauchy_error(e.model, eff, cut, 1.0, 3.0, 3.0 / 3.0, opts);
  CauchyErrorReport r2 = cauchy_error(e.model, eff, cut, 1.0, 2.0, 2.0 / 2.0, opts);
  bool ok = r3.fit.slope >= 0.85 && r2.fit.slope >= 0.85 && timer.seconds() < 120.0;
  verdict(8, "Cauchy-problem rates (s=3, s=2)", ok, timer.seconds(),
          fmt("s=3: %.3f", r3.fit.slope) + fmt(", s=2: %.3f", r2.fit.slope));
}

// ---- criterion 9: spin-model closed forms ---------------------------------

void criterion_9() {
  Timer timer;
  GalleryEntry e = pauli_example_16_2();
  const PauliClosedForm& cf = *e.pauli_forms;
  bool ok = cf.mean_w2v_plus.real() > 0.0;
  double worst_form = 0;

  // closed forms vs the generic Q-weighted pipeline, block by block
  for (int blk = 0; blk < 2; ++blk) {
    const OperatorModel& block = e.block_models[blk];
    EffectiveData eff = compute_effective(block, e.cell_cutoff);
    int sign = blk == 0 ? +1 : -1;
    double g0_ref = blk == 0 ? cf.g0_plus : cf.g0_minus;
    worst_form = std::max(worst_form, std::abs(eff.g0(0, 0).real() - g0_ref));
    for (int j = 0; j < 8; ++j) {
      double ang = 2.0 * kPi * j / 8.0;
      Eigen::VectorXd theta = dir2(std::cos(ang), std::sin(ang));
      GermData germ = germ_eigen(germ_matrix(eff.g0, block.b, theta), block.Q_bar, theta);
      CorrectorData cd = corrector_data(block, eff, germ);
      worst_form = std::max(worst_form, std::abs(cd.N_hat(0, 0).real() - cf.N_Q(theta, sign)));
      worst_form = std::max(worst_form, std::abs(cd.mu[0] - cf.mu(theta, sign)));
    }
  }
  ok = ok && worst_form <= 1e-8;

  // fiber-wise unitary equivalence of the two blocks: spectra on a 16^2 grid
  double worst_spec = 0;
  KGrid grid = k_grid(e.model.lattice, 16);
  Eigen::VectorXi cut = cut2(1, 16);
  for (const auto& k : grid.points) {
    FiberOperator plus = assemble_fiber(e.block_models[0], k, cut);
    FiberOperator minus = assemble_fiber(e.block_models[1], k, cut);
    Eigen::VectorXd ep = fiber_spectrum(plus, 4).energies;
    Eigen::VectorXd em = fiber_spectrum(minus, 4).energies;
    worst_spec = std::max(worst_spec, (ep - em).cwiseAbs().maxCoeff());
  }
  ok = ok && worst_spec <= 1e-9 && timer.seconds() < 120.0;
  verdict(9, "spin-model closed forms and block spectra", ok, timer.seconds(),
          fmt("form dev %.1e", worst_form) + fmt(", spectra dev %.1e", worst_spec));
}

// ---- criterion 10: structural invariant suite -----------------------------

Eigen::VectorXi structural_cutoff(const GalleryEntry& e, int bump) {
  Eigen::VectorXi cut = e.cell_cutoff.cwiseMin(12);
  cut = cut.cwiseMax(Eigen::VectorXi::Ones(cut.size()));
  // refine along the axis that actually resolves the coefficients
  int axis = 0;
  e.cell_cutoff.maxCoeff(&axis);
  cut[axis] += bump;
  return cut;
}

void criterion_10() {
  Timer timer;
  bool ok = true;
  std::string failed;
  for (const auto& name : gallery_names()) {
    GalleryEntry e = make_gallery(name);
    const OperatorModel& model = e.model;
    const int d = model.lattice.dim, n = model.b.n();
    ThresholdParams tp = threshold_params(model);
    const double r0 = model.lattice.r0;
    Eigen::VectorXi cut = structural_cutoff(e, 0);
    bool model_ok = true;

    // fiber PSD-ness and kernel dimension n at k = 0
    FiberOperator at0 = assemble_fiber(model, Eigen::VectorXd::Zero(d), cut);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es0(at0.A, Eigen::EigenvaluesOnly);
    model_ok = model_ok && es0.eigenvalues().minCoeff() >= -1e-10;
    for (int j = 0; j < n; ++j) model_ok = model_ok && std::abs(es0.eigenvalues()[j]) <= 1e-9;
    model_ok = model_ok && es0.eigenvalues()[n] >= tp.c_star * r0 * r0 - 1e-9;

    // band lower bounds on a k sample
    KGrid grid = k_grid(model.lattice, d == 1 ? 6 : 3);
    for (const auto& k : grid.points) {
      FiberOperator fiber = assemble_fiber(model, k, cut);
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(fiber.A, Eigen::EigenvaluesOnly);
      model_ok = model_ok && es.eigenvalues().minCoeff() >= -1e-10;
      for (int j = 0; j < n; ++j)
        model_ok = model_ok && es.eigenvalues()[j] >= tp.c_star * k.squaredNorm() - 1e-9;
      model_ok = model_ok && es.eigenvalues()[n] >= tp.c_star * r0 * r0 - 1e-9;
    }

    // smoothing bound and exponential structure at one k
    Eigen::VectorXd ks = Eigen::VectorXd::Constant(d, 0.12);
    FiberOperator fiber = assemble_fiber(model, ks, cut);
    for (double eps : {0.25, 0.0625}) {
      for (double s : {2.0, 3.0}) {
        double norm = smoothing_complement_norm(model.lattice, fiber.freqs, ks, eps, s, n);
        model_ok = model_ok && norm <= std::pow(eps / r0, s) + 1e-14;
      }
    }
    FiberEigen eig = FiberEigen::of(fiber.A);
    MatrixXcd I = MatrixXcd::Identity(fiber.A.rows(), fiber.A.cols());
    MatrixXcd U = eig.exponential(1.3);
    model_ok = model_ok && (U * U.adjoint() - I).operatorNorm() <= 1e-10;
    model_ok = model_ok &&
               (U * eig.exponential(0.9) - eig.exponential(2.2)).operatorNorm() <= 1e-10;

    // K-refinement stability of the low bands
    FiberOperator fine = assemble_fiber(model, ks, structural_cutoff(e, 4));
    Eigen::VectorXd ec = fiber_spectrum(fiber, n + 1).energies;
    Eigen::VectorXd ef = fiber_spectrum(fine, n + 1).energies;
    for (int j = 0; j <= n; ++j)
      model_ok = model_ok &&
                 std::abs(ec[j] - ef[j]) <= 1e-8 * std::max(1.0, std::abs(ef[j]));

    if (!model_ok) failed += (failed.empty() ? "" : ", ") + name;
    ok = ok && model_ok;
  }
  ok = ok && timer.seconds() < 180.0;
  verdict(10, "structural invariants (all gallery models)", ok, timer.seconds(),
          failed.empty() ? "all models" : "failed: " + failed);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures == 0)
    std::printf("acceptance: all 10 criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return g_failures;
}
