#ifndef BH_EFFECTIVE_HPP
#define BH_EFFECTIVE_HPP

#include "bh/model.hpp"

namespace bh {

/** Output of the periodic cell problems: the mean-zero corrector Lambda
 * (n x m), the flux field g_tilde = g (b(D)Lambda + 1), its mean g0, and the
 * weighted-mean-zero corrector Lambda_Q = Lambda + Lambda_Q0 used with
 * non-identity f. */
struct EffectiveData {
  PeriodicField Lambda;
  PeriodicField g_tilde;
  MatrixXcd g0;
  PeriodicField Lambda_Q;
  MatrixXcd Lambda_Q0;
  MatrixXcd f0;
  double cell_residual = 0.0;       // relative Galerkin residual
  double weak_form_residual = 0.0;  // test-frequency residual of the flux
  double condition_estimate = 0.0;
};

/** Galerkin solution of b(D)* g (b(D)Lambda + 1_m) = 0, mean(Lambda) = 0, in
 * the truncated Fourier space with per-axis cutoffs.  The zero frequency is
 * removed structurally; the system matrix restricted to nonzero frequencies
 * is Hermitian positive definite. */
PeriodicField solve_cell_problem(const OperatorModel& model, const Eigen::VectorXi& cutoff,
                                 double* residual = nullptr, double* condition = nullptr);
PeriodicField solve_cell_problem(const OperatorModel& model, int K,
                                 double* residual = nullptr, double* condition = nullptr);

/** Flux field and its mean.  g0 is Hermitized; a skew part above 1e-10
 * (relative) aborts, since it indicates aliasing or an assembly bug. */
std::pair<PeriodicField, MatrixXcd> effective_matrix(const OperatorModel& model,
                                                     const PeriodicField& Lambda);

/** Everything at once, including the Q-weighted corrector. */
EffectiveData compute_effective(const OperatorModel& model, const Eigen::VectorXi& cutoff);
EffectiveData compute_effective(const OperatorModel& model, int K);

struct VoigtReussReport {
  MatrixXcd g_upper;       // arithmetic mean of g
  MatrixXcd g_lower;       // harmonic mean of g
  double min_eig_upper_gap = 0;  // lambda_min(g_upper - g0)
  double min_eig_lower_gap = 0;  // lambda_min(g0 - g_lower)
  double equality_defect_lower = 0;  // |g0 - g_lower| (relevant when m = n)
  bool ok = false;
};

/** Bracketing of g0 between the harmonic and arithmetic means of g. */
VoigtReussReport voigt_reuss_check(const MatrixXcd& g0, const PeriodicField& g,
                                   double tol = 1e-9);

struct DegenerateCases {
  bool g0_equals_upper = false;  // each column of g is divergence-free: b(D)* g_k = 0
  bool g0_equals_lower = false;  // each column of g^{-1} is constant + b(D) w_k
  double upper_defect = 0;
  double lower_defect = 0;
};

DegenerateCases classify_degenerate_cases(const OperatorModel& model, double tol = 1e-10);

/** Constant shift making the corrector Q-weighted mean zero:
 * Lambda_Q = Lambda + Lambda_Q0 with Lambda_Q0 = -Q_bar^{-1} mean(Q Lambda). */
std::pair<PeriodicField, MatrixXcd> solve_cell_problem_Q(const OperatorModel& model,
                                                         const PeriodicField& Lambda);

}  // namespace bh

#endif
