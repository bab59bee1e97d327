#ifndef BH_GALLERY_HPP
#define BH_GALLERY_HPP

#include <map>
#include <optional>
#include <string>

#include "bh/model.hpp"

namespace bh {

/** Closed-form threshold data for the two-dimensional spin model, computed by
 * dedicated routines independent of the generic cell-problem pipeline.  The
 * operator splits into two scalar chiral blocks with weights w_pm = omega_pm^2;
 * each block has effective constant g0_pm = harmonic mean of w_pm, and the
 * third-order coefficient comes from the scalar corrector v_pm solving
 * (D_1 -+ i D_2) v_pm = g0_pm w_mp - 1 with zero mean. */
struct PauliClosedForm {
  double g0_plus = 0, g0_minus = 0;
  double gamma = 0;  // g0_plus * g0_minus, the isotropic dispersion constant
  PeriodicField v_plus, v_minus;
  cdouble mean_w2v_plus{0, 0}, mean_w2v_minus{0, 0};  // mean(omega_pm^2 v_pm)

  /** Weighted third-order form per block:
   * -2 gamma (theta_1 Re M_pm +- theta_2 Im M_pm) with M as stored above. */
  double N_Q(const Eigen::VectorXd& theta, int sign) const;
  /** Dispersion-branch cubic coefficient: g0_mp * N_Q. */
  double mu(const Eigen::VectorXd& theta, int sign) const;
};

PauliClosedForm pauli_closed_form(const Lattice& lat, const PeriodicField& omega_plus_sq,
                                  const PeriodicField& omega_minus_sq);

/** A ready-to-run model together with its independently known reference
 * values.  `cell_cutoff` is a truncation that resolves the coefficients to
 * near machine precision (all bundled coefficients depend on one variable, so
 * the cutoffs are anisotropic). */
struct GalleryEntry {
  std::string name;
  OperatorModel model;
  Eigen::VectorXi cell_cutoff;
  std::map<std::string, double> ref_scalars;
  std::map<std::string, MatrixXcd> ref_matrices;
  std::map<std::string, std::string> notes;

  std::optional<PauliClosedForm> pauli_forms;
  std::vector<OperatorModel> block_models;   // scalar chiral blocks (spin model)
  std::optional<PeriodicField> potential;    // recovered potential (factorized Schrodinger)
};

/** d=2, n=2, m=3 model with diagonal coefficient
 * g(x_1) = diag(1, 4(1 + sin(x_1)/2)^{-1}, 1 + cos(x_1)/2); the effective
 * matrix is diag(1,4,1) and the dispersion branches are 1 +- theta_1 theta_2,
 * which cross on the axes.  The third-order form at theta = (0,1) has
 * eigenvalues +-1/8 and vanishes at theta = (+-1, 0). */
GalleryEntry example_8_7();

/** d=2 scalar model with the non-real weight g = [[1, i beta'], [-i beta', 1]],
 * beta(x_1) = c (sin x_1 + cos 2 x_1).  The third-order coefficient is
 * (3/2) c^3 theta_2^3, nonzero away from (+-1, 0). */
GalleryEntry example_15_1(double c);

/** Factorized Schrodinger operator omega^{-1} D* omega^2 gcheck D omega^{-1};
 * omega is renormalized so that mean(omega^2) = 1, making the weighted mean
 * constants trivial (Q_bar = 1, f0 = 1).  The equivalent potential
 * V = -omega^{-1} D*(gcheck D omega) is recovered for display.  For real
 * symmetric gcheck the weighted third-order form vanishes identically. */
GalleryEntry schrodinger_factorized(const PeriodicField& omega, const PeriodicField& g_check,
                                    std::optional<Lattice> lat = std::nullopt);

/** Two-dimensional spin model built from a real mean-zero scalar potential
 * phi: omega_pm = exp(+-phi), f = diag(omega_plus, omega_minus), g = f^2, and
 * b(D) = D_1 sigma_1 + D_2 sigma_2.  The entry carries the closed-form
 * threshold data and the two scalar chiral block models.
 *
 * By default phi is recentered to mean zero (the gauge normalization).  The
 * closed-form reference values only need omega_plus * omega_minus = 1, so a
 * profile-derived phi may opt out to keep its published weights intact. */
GalleryEntry pauli(const PeriodicField& phi, std::optional<Lattice> lat = std::nullopt,
                   bool recenter_phi = true);

/** Spin model with omega_minus^2 = 1 + alpha (sin x_2 + 4 sin 2 x_2); for
 * small alpha the block corrector is v_plus = alpha (cos x_2 + 2 cos 2 x_2)
 * and mean(omega_plus^2 v_plus) > 0, so the cubic dispersion term is nonzero
 * whenever theta_1 != 0. */
GalleryEntry pauli_example_16_2(double alpha = 1.0 / 16.0);

/** One-dimensional scalar model; the effective constant is the harmonic mean
 * of the profile and the third-order form vanishes (m = n = 1 with real g). */
GalleryEntry scalar_1d(const PeriodicField& profile, std::optional<Lattice> lat = std::nullopt);

std::vector<std::string> gallery_names();

/** Build a named entry with its default parameters. */
GalleryEntry make_gallery(const std::string& name);

/** Why there is no magnetic-Schrodinger entry. */
std::string magnetic_note();

}  // namespace bh

#endif
