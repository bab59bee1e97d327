#ifndef BH_MODEL_HPP
#define BH_MODEL_HPP

#include <optional>
#include <string>

#include "bh/field.hpp"

namespace bh {

/** First-order constant symbol b(xi) = sum_l xi_l b_l with m x n matrices
 * b_l, m >= n, injective on every nonzero direction. */
struct MatrixSymbol {
  std::vector<MatrixXcd> coeff;  // d matrices, m x n

  int dim() const { return static_cast<int>(coeff.size()); }
  int m() const { return static_cast<int>(coeff[0].rows()); }
  int n() const { return static_cast<int>(coeff[0].cols()); }
  MatrixXcd at(const Eigen::VectorXd& xi) const;
};

/** Deterministic unit directions for sphere extrema: {+-1} in 1D, uniform
 * angles in 2D, a Fibonacci spiral in higher dimensions. */
std::vector<Eigen::VectorXd> sphere_directions(int dim, int n_theta);

/** Sampled extrema of the symbol ellipticity bounds:
 * alpha0 = min_theta lambda_min(b(theta)* b(theta)), alpha1 = max lambda_max. */
std::pair<double, double> alpha_bounds(const MatrixSymbol& b, int n_theta = 0);

/** The operator triple (b, g, f) on a lattice with derived data.  f absent
 * means identity; Q = (f f*)^{-1}, Q_bar its mean, f0 = Q_bar^{-1/2}. */
struct OperatorModel {
  Lattice lattice;
  MatrixSymbol b;
  PeriodicField g;      // m x m Hermitian positive
  PeriodicField f;      // n x n invertible
  bool f_is_identity = true;

  PeriodicField h;      // g^{1/2} pointwise
  PeriodicField f_inv;  // f^{-1} pointwise
  PeriodicField Q;      // (f f*)^{-1}
  MatrixXcd Q_bar;
  MatrixXcd f0;         // Q_bar^{-1/2}
  MatrixXcd f0_inv;

  /** False when g or f is too degenerate for the derived fields (h, f^{-1},
   * Q, ...) to exist; validate() reports the precise violation. */
  bool derived_ok = false;

  double alpha0 = 0, alpha1 = 0;
  double g_norm = 0, g_inv_norm = 0, f_norm = 0, f_inv_norm = 0;
  double h_norm = 0;  // = sqrt(g_norm)

  static OperatorModel build(const Lattice& lat, const MatrixSymbol& b,
                             const PeriodicField& g,
                             std::optional<PeriodicField> f = std::nullopt,
                             int n_theta = 0);
};

struct ValidationIssue {
  std::string what;
  std::string witness;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
};

/** Standing-assumption checks: m >= n, rank condition (alpha0 above
 * tolerance), Hermitian positivity of g on the grid, invertibility of f. */
ValidationReport validate(const OperatorModel& model);

/** Threshold constants, in both the general form and the f = identity
 * specialization (norms are grid suprema; |h| is taken as |g|^{1/2}). */
struct ThresholdParams {
  double c_star = 0;      // alpha0 / (|g^-1| |f^-1|^2)
  double delta = 0;       // c_star r0^2 / 4
  double t0 = 0;          // delta^{1/2} alpha1^{-1/2} |h|^{-1} |f|^{-1}
  double c_star_hat = 0;  // alpha0 / |g^-1|
  double delta_hat = 0;
  double t0_hat = 0;      // (r0/2) (alpha0/alpha1)^{1/2} (|g||g^-1|)^{-1/2}
};

ThresholdParams threshold_params(const OperatorModel& model);

}  // namespace bh

#endif
