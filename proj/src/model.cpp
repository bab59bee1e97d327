#include "bh/model.hpp"

#include <cmath>
#include <numbers>

namespace bh {

MatrixXcd MatrixSymbol::at(const Eigen::VectorXd& xi) const {
  MatrixXcd out = MatrixXcd::Zero(m(), n());
  for (int l = 0; l < dim(); ++l) out += xi[l] * coeff[l];
  return out;
}

std::vector<Eigen::VectorXd> sphere_directions(int dim, int n_theta) {
  std::vector<Eigen::VectorXd> dirs;
  if (dim == 1) {
    dirs.push_back(Eigen::VectorXd::Constant(1, 1.0));
    dirs.push_back(Eigen::VectorXd::Constant(1, -1.0));
    return dirs;
  }
  if (dim == 2) {
    dirs.reserve(n_theta);
    for (int i = 0; i < n_theta; ++i) {
      double ang = 2.0 * std::numbers::pi * i / n_theta;
      Eigen::VectorXd v(2);
      v << std::cos(ang), std::sin(ang);
      dirs.push_back(v);
    }
    return dirs;
  }
  if (dim == 3) {
    // Fibonacci spiral: deterministic, low discrepancy
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    dirs.reserve(n_theta);
    for (int i = 0; i < n_theta; ++i) {
      double z = 1.0 - 2.0 * (i + 0.5) / n_theta;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double ang = golden * i;
      Eigen::VectorXd v(3);
      v << r * std::cos(ang), r * std::sin(ang), z;
      dirs.push_back(v);
    }
    return dirs;
  }
  throw std::invalid_argument("sphere sampling implemented for d <= 3");
}

std::pair<double, double> alpha_bounds(const MatrixSymbol& b, int n_theta) {
  if (n_theta <= 0) n_theta = (b.dim() >= 3) ? 2048 : 512;
  double a0 = std::numeric_limits<double>::infinity();
  double a1 = 0.0;
  for (const auto& theta : sphere_directions(b.dim(), n_theta)) {
    MatrixXcd bt = b.at(theta);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(bt.adjoint() * bt, Eigen::EigenvaluesOnly);
    a0 = std::min(a0, es.eigenvalues().minCoeff());
    a1 = std::max(a1, es.eigenvalues().maxCoeff());
  }
  return {a0, a1};
}

OperatorModel OperatorModel::build(const Lattice& lat, const MatrixSymbol& b,
                                   const PeriodicField& g,
                                   std::optional<PeriodicField> f, int n_theta) {
  if (b.dim() != lat.dim) throw std::invalid_argument("symbol dimension mismatch");
  if (g.rows() != b.m() || g.cols() != b.m())
    throw std::invalid_argument("g must be m x m for the symbol's m");
  OperatorModel model;
  model.lattice = lat;
  model.b = b;
  model.g = g;
  model.f_is_identity = !f.has_value();
  model.f = f ? *f : PeriodicField::identity(b.n(), g.grid_shape());
  if (model.f.rows() != b.n() || model.f.cols() != b.n())
    throw std::invalid_argument("f must be n x n for the symbol's n");

  // derived data exists only for admissible coefficients; a failure here
  // leaves the raw triple in place so validate() can point at the violation
  std::tie(model.alpha0, model.alpha1) = alpha_bounds(b, n_theta);
  model.g_norm = g.sup_norm();
  model.f_norm = model.f.sup_norm();
  try {
    model.h = g.sqrt_psd();
    model.f_inv = model.f.inverse();
    model.Q = model.f.multiply(model.f.adjoint()).inverse();
    model.Q_bar = model.Q.mean();

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (model.Q_bar + model.Q_bar.adjoint()));
    if (es.eigenvalues().minCoeff() < 1e-12)
      throw std::runtime_error("Q_bar not positive definite (eigenvalue below 1e-12)");
    Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
    model.f0 = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
    model.f0_inv = model.f0.inverse();

    model.g_inv_norm = g.inverse().sup_norm();
    model.f_inv_norm = model.f_inv.sup_norm();
    model.h_norm = std::sqrt(model.g_norm);
    model.derived_ok = true;
  } catch (const std::exception&) {
    model.derived_ok = false;
  }
  return model;
}

ValidationReport validate(const OperatorModel& model) {
  ValidationReport report;
  auto fail = [&](std::string what, std::string witness) {
    report.ok = false;
    report.issues.push_back({std::move(what), std::move(witness)});
  };
  if (model.b.m() < model.b.n())
    fail("symbol has m < n", "m=" + std::to_string(model.b.m()) + " n=" + std::to_string(model.b.n()));
  for (int l = 0; l < model.b.dim(); ++l)
    if (model.b.coeff[l].rows() != model.b.m() || model.b.coeff[l].cols() != model.b.n())
      fail("symbol coefficient shape mismatch", "l=" + std::to_string(l));
  if (model.alpha0 < 1e-10)
    fail("rank condition fails: alpha0 below tolerance", "alpha0=" + std::to_string(model.alpha0));
  if (!model.g.is_hermitian(1e-12)) fail("g is not Hermitian on the grid", "");
  for (int i = 0; i < model.g.num_samples(); ++i) {
    const MatrixXcd& s = model.g.sample(i);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (s + s.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 1e-12) {
      Eigen::VectorXi n = model.g.grid_index(i);
      std::string where;
      for (int ax = 0; ax < n.size(); ++ax) where += (ax ? "," : "") + std::to_string(n[ax]);
      fail("g not positive definite", "grid point (" + where + ")");
      break;
    }
  }
  for (int i = 0; i < model.f.num_samples(); ++i) {
    Eigen::JacobiSVD<MatrixXcd> svd(model.f.sample(i));
    if (svd.singularValues().minCoeff() <= 1e-12) {
      Eigen::VectorXi n = model.f.grid_index(i);
      std::string where;
      for (int ax = 0; ax < n.size(); ++ax) where += (ax ? "," : "") + std::to_string(n[ax]);
      fail("f singular", "grid point (" + where + ")");
      break;
    }
  }
  if (report.ok && !model.derived_ok)
    fail("derived coefficient data unavailable", "g^{1/2}, f^{-1} or Q_bar^{-1/2} failed");
  return report;
}

ThresholdParams threshold_params(const OperatorModel& model) {
  ThresholdParams p;
  const double r0 = model.lattice.r0;
  p.c_star = model.alpha0 / (model.g_inv_norm * model.f_inv_norm * model.f_inv_norm);
  p.delta = p.c_star * r0 * r0 / 4.0;
  p.t0 = std::sqrt(p.delta / model.alpha1) / (model.h_norm * model.f_norm);
  p.c_star_hat = model.alpha0 / model.g_inv_norm;
  p.delta_hat = p.c_star_hat * r0 * r0 / 4.0;
  p.t0_hat = 0.5 * r0 * std::sqrt(model.alpha0 / model.alpha1) /
             std::sqrt(model.g_norm * model.g_inv_norm);
  return p;
}

}  // namespace bh
