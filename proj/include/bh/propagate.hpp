#ifndef BH_PROPAGATE_HPP
#define BH_PROPAGATE_HPP

#include "bh/bloch.hpp"

namespace bh {

/** Eigendecomposition of a Hermitian fiber matrix, reused across the epsilon
 * ladder (the epsilon-dependence enters only through phases and smoothing). */
struct FiberEigen {
  Eigen::VectorXd E;
  MatrixXcd V;

  static FiberEigen of(const MatrixXcd& A);
  MatrixXcd exponential(double tau_eff) const;
};

MatrixXcd fiber_exponential(const MatrixXcd& hermitian, double tau_eff);

/** Diagonal symbol of R(k,eps)^{s/2}: eps^s (|b+k|^2 + eps^2)^{-s/2} per
 * frequency, repeated for the n vector components. */
Eigen::VectorXd smoothing_symbol(const Lattice& lat, const FrequencySet& freqs,
                                 const Eigen::VectorXd& k, double eps, double s, int n);

/** Operator norm of R^{s/2}(1 - P) (max of the symbol over nonzero
 * frequencies); bounded by (eps/r0)^s. */
double smoothing_complement_norm(const Lattice& lat, const FrequencySet& freqs,
                                 const Eigen::VectorXd& k, double eps, double s, int n);

/** Everything needed at one k to evaluate the smoothed exponential
 * difference for any (eps, tau, s); includes the dressing convolutions when
 * the model has a non-identity f. */
struct FiberPair {
  Eigen::VectorXd k;
  FrequencySet freqs;
  FiberEigen periodic;   // A(k)
  FiberEigen effective;  // A0(k)
  MatrixXcd Fc, Fc_inv;  // convolution matrices of f, f^{-1} (empty when f = 1)
  MatrixXcd f0_blocks, f0_inv_blocks;
  bool sandwiched = false;
};

FiberPair prepare_fiber_pair(const OperatorModel& model, const EffectiveData& eff,
                             const Eigen::VectorXd& k, const Eigen::VectorXi& cutoff,
                             bool sandwiched);

/** | (E(k) - E0(k)) R(k,eps)^{s/2} | with E the plain or dressed fiber
 * exponentials at tau_eff = tau/eps^2. */
double fiber_error_norm(const OperatorModel& model, const FiberPair& pair, double eps,
                        double tau, double s);
double fiber_error_norm(const OperatorModel& model, const EffectiveData& eff,
                        const Eigen::VectorXd& k, double eps, double tau, double s,
                        const Eigen::VectorXi& cutoff, bool sandwiched = false);

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  bool degenerate = false;  // all values below the measurable floor
};

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct ErrorSweep {
  double tau = 0, s = 0;
  std::vector<double> eps;
  std::vector<double> eta;    // max over the k-grid per eps
  SlopeFit fit;
  bool sandwiched = false;
};

struct SweepOptions {
  int N_k = 16;
  std::vector<double> eps_ladder;  // default {2^-3 .. 2^-8}
  int enrich_dirs = 16;            // radial points at {1/2,1,2} eps^(2/3)
  double enrich_scale = 1.0;
  int threads = 0;                 // 0: hardware/env default
};

/** Max over the k-grid (uniform midpoint grid plus radial enrichment near
 * k = 0 at the threshold scale eps^(2/3)) of the smoothed exponential
 * difference, with a log-log slope fit over the epsilon ladder. */
ErrorSweep error_sweep(const OperatorModel& model, const EffectiveData& eff,
                       const Eigen::VectorXi& cutoff, double tau, double s,
                       const SweepOptions& opts = {}, bool sandwiched = false);

struct SharpnessReport {
  double s = 0, tau = 0;
  std::vector<double> eps;
  std::vector<double> ratio;  // eta_s(eps) / eps
  SlopeFit fit;               // growth exponent of the ratio
};

/** Error at the single resonant point k = t(eps) theta0 with
 * t(eps) = pi^(1/3) |mu tau|^(-1/3) eps^(2/3), where the phase mismatch of
 * the cubic term is order one; the ratio eta/eps behaves like eps^(s/3-1). */
SharpnessReport sharpness_probe(const OperatorModel& model, const EffectiveData& eff,
                                const Eigen::VectorXd& theta0, double mu, double tau,
                                double s, const std::vector<double>& eps_ladder,
                                const Eigen::VectorXi& cutoff);

struct CauchyErrorReport {
  double tau = 0, s = 0;
  double phi_sobolev_norm = 0;  // H^s-type norm of the implied data
  std::vector<double> eps;
  std::vector<double> error;      // L2 error by weighted Parseval sum
  std::vector<double> normalized; // error / (eps^rate * |phi|)
  double rate = 0;                // s/3 generic, s/2 in the enhanced regime
  SlopeFit fit;                   // slope of log error vs log eps
};

/** Homogeneous Cauchy-problem demonstrator.  The initial datum is defined by
 * its fiber data on the quadrature grid (a Gaussian radial profile on the
 * constants component); the quadrature replaces the continuum direct
 * integral, i.e. phi is the Bloch synthesis of the grid data. */
CauchyErrorReport cauchy_error(const OperatorModel& model, const EffectiveData& eff,
                               const Eigen::VectorXi& cutoff, double tau, double s,
                               double rate, const SweepOptions& opts = {});

}  // namespace bh

#endif
