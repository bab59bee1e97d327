#ifndef BH_GERM_HPP
#define BH_GERM_HPP

#include "bh/effective.hpp"

namespace bh {

/** Germ eigendata for one direction.  Vectors solve the generalized problem
 * S(theta) zeta = gamma Q_bar zeta and are Q_bar-orthonormal; with f = 1 this
 * is the ordinary Hermitian problem.  Clusters are maximal groups of
 * ascending eigenvalues whose relative gap is below cluster_tol. */
struct GermData {
  Eigen::VectorXd theta;
  MatrixXcd S_hat;
  Eigen::VectorXd gamma;
  MatrixXcd vectors;                    // columns zeta_l
  std::vector<std::vector<int>> clusters;
};

/** Third-order corrector at a direction: N = b* L b restricted to the
 * constants, its cluster-diagonal and off-diagonal parts in the (skew)
 * cluster projections, and the diagonal coefficients mu_l = zeta* N zeta. */
struct CorrectorData {
  MatrixXcd L;
  MatrixXcd N_hat;
  MatrixXcd N0;
  MatrixXcd Nstar;
  Eigen::VectorXd mu;
  bool cluster_ambiguous = false;
};

MatrixXcd germ_matrix(const MatrixXcd& g0, const MatrixSymbol& b, const Eigen::VectorXd& theta);

GermData germ_eigen(const MatrixXcd& S_hat, const MatrixXcd& Q_bar,
                    const Eigen::VectorXd& theta, double cluster_tol = 1e-8);

/** L(theta) = mean(Lambda* b(theta)* g_tilde + g_tilde* b(theta) Lambda);
 * pass Lambda_Q for the weighted variant. */
MatrixXcd L_matrix(const PeriodicField& Lambda, const PeriodicField& g_tilde,
                   const MatrixSymbol& b, const Eigen::VectorXd& theta);

MatrixXcd N_hat_matrix(const MatrixXcd& L, const MatrixSymbol& b, const Eigen::VectorXd& theta);

/** Splitting through the Q_bar-orthogonal cluster projections
 * P_j = Z_j Z_j* Q_bar (orthogonal projections when Q_bar = 1). */
CorrectorData split_N(const MatrixXcd& N_hat, const GermData& germ, const MatrixXcd& Q_bar,
                      const MatrixXcd& L, double cluster_tol = 1e-8);

/** Corrector pipeline for one direction; uses (Lambda, g_tilde) and the
 * weighted corrector when the model has a non-identity f. */
CorrectorData corrector_data(const OperatorModel& model, const EffectiveData& eff,
                             const GermData& germ);

/** Cubic matrix polynomial N(k) reconstructed exactly from the d axis
 * matrices L(e_l): coefficient of the monomial k_a k_b k_c (a <= b <= c),
 * symmetrized.  The polynomial vanishes identically on the sphere iff all
 * coefficients vanish. */
struct CubicPolynomial {
  int dim = 0;
  std::vector<std::tuple<int, int, int>> monomials;
  std::vector<MatrixXcd> coeff;
  double max_coeff_norm() const;
  MatrixXcd eval(const Eigen::VectorXd& k) const;
};

CubicPolynomial N_polynomial(const OperatorModel& model, const EffectiveData& eff);

struct ConditionReport {
  bool N_identically_zero = false;   // via polynomial coefficients
  bool N0_identically_zero = false;  // via the sweep
  bool condition_A = false;  // N0 == 0 and crossing pairs have vanishing blocks
  bool condition_B = false;  // N0 == 0 and constant multiplicity pattern
  std::vector<std::pair<int, int>> crossing_pairs;
  std::vector<std::pair<int, int>> nonzero_block_pairs;  // the set of relevant pairs
  double max_N_norm = 0;
  double max_N0_norm = 0;
  double c_circ = 0;  // min over relevant pairs and theta of min(c_*, |gamma_k - gamma_r|/n)
  double t_circ = 0;  // threshold radius from c_circ, up to an absolute constant
  std::vector<GermData> sweep;
  std::vector<CorrectorData> sweep_correctors;
};

/** Sphere sweep: branch values, crossings, corrector blocks, the vanishing
 * verdicts and the derived constants.  Uses the weighted objects when the
 * model has a non-identity f. */
ConditionReport condition_check(const OperatorModel& model, const EffectiveData& eff,
                                int n_theta = 0, double cluster_tol = 1e-8,
                                double zero_tol = 1e-10);

}  // namespace bh

#endif
