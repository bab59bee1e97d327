#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bh/gallery.hpp"

using namespace bh;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Eigen::VectorXi grid1(int n) {
  Eigen::VectorXi g(1);
  g << n;
  return g;
}

}  // namespace

TEST_CASE("symbol evaluation and ellipticity bounds") {
  GalleryEntry e = example_8_7();
  const MatrixSymbol& b = e.model.b;
  Eigen::VectorXd xi(2);
  xi << 1.0, 2.0;
  MatrixXcd bx = b.at(xi);
  CHECK(bx(0, 0).real() == doctest::Approx(1.0));
  CHECK(bx(1, 0).real() == doctest::Approx(1.0));   // 2 * 1/2
  CHECK(bx(1, 1).real() == doctest::Approx(0.5));
  CHECK(bx(2, 1).real() == doctest::Approx(2.0));

  // min over theta of lambda_min(b* b) is 1/4, attained on the axes;
  // the max is 1 (also on the axes)
  auto [a0, a1] = alpha_bounds(b, 720);
  CHECK(a0 == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(a1 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(e.model.alpha0 == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(e.model.alpha1 == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("scalar gradient symbol has unit bounds") {
  GalleryEntry e = make_gallery("scalar_1d");
  CHECK(e.model.alpha0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.model.alpha1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("validation accepts the bundled models") {
  for (const auto& name : gallery_names()) {
    GalleryEntry e = make_gallery(name);
    ValidationReport rep = validate(e.model);
    INFO(name);
    CHECK(rep.ok);
    CHECK(rep.issues.empty());
  }
}

TEST_CASE("validation rejects m < n") {
  Lattice lat = Lattice::from_basis(2.0 * kPi * Eigen::MatrixXd::Identity(1, 1));
  MatrixSymbol b;
  b.coeff = {MatrixXcd::Constant(1, 2, 1.0)};  // m=1 < n=2
  PeriodicField g = PeriodicField::identity(1, grid1(8));
  OperatorModel model = OperatorModel::build(lat, b, g);
  ValidationReport rep = validate(model);
  CHECK_FALSE(rep.ok);
  REQUIRE_FALSE(rep.issues.empty());
}

TEST_CASE("validation rejects indefinite g with a grid witness") {
  Lattice lat = Lattice::from_basis(2.0 * kPi * Eigen::MatrixXd::Identity(1, 1));
  MatrixSymbol b;
  b.coeff = {MatrixXcd::Constant(1, 1, 1.0)};
  auto gen = [](const Eigen::VectorXd& frac) {
    return MatrixXcd::Constant(1, 1, std::sin(2 * kPi * frac[0]));  // changes sign
  };
  PeriodicField g = PeriodicField::from_samples(1, 1, grid1(16), gen, grid1(1));
  OperatorModel model = OperatorModel::build(lat, b, g);
  ValidationReport rep = validate(model);
  CHECK_FALSE(rep.ok);
  bool has_witness = false;
  for (const auto& issue : rep.issues) has_witness = has_witness || !issue.witness.empty();
  CHECK(has_witness);
}

TEST_CASE("threshold constants for the 1d scalar model") {
  GalleryEntry e = make_gallery("scalar_1d");
  ThresholdParams tp = threshold_params(e.model);
  // alpha0 = alpha1 = 1, |g| = 3, |g^{-1}| = 1, r0 = 1/2, f = 1
  CHECK(tp.c_star_hat == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tp.delta_hat == doctest::Approx(1.0 / 16).epsilon(1e-12));
  CHECK(tp.t0_hat == doctest::Approx(0.25 / std::sqrt(3.0)).epsilon(1e-12));
  // with f = 1 the general and hatted constants coincide
  CHECK(tp.c_star == doctest::Approx(tp.c_star_hat).epsilon(1e-12));
  CHECK(tp.t0 == doctest::Approx(tp.t0_hat).epsilon(1e-12));
}

TEST_CASE("weighted-mean data of the factorized models") {
  GalleryEntry e = make_gallery("schrodinger_factorized");
  CHECK_FALSE(e.model.f_is_identity);
  // mean(omega^2) = 1 so Q_bar = mean((f f*)^{-1}) = mean(omega^2) = 1
  CHECK(std::abs(e.model.Q_bar(0, 0) - 1.0) <= 1e-12);
  CHECK(std::abs(e.model.f0(0, 0) - 1.0) <= 1e-12);

  GalleryEntry p = make_gallery("pauli");
  // Q = diag(omega_minus^2, omega_plus^2); its mean is diag(1/g0_plus, 1/g0_minus)
  REQUIRE(p.pauli_forms.has_value());
  CHECK(std::abs(p.model.Q_bar(0, 0).real() - 1.0 / p.pauli_forms->g0_plus) <= 1e-10);
  CHECK(std::abs(p.model.Q_bar(1, 1).real() - 1.0 / p.pauli_forms->g0_minus) <= 1e-10);
  CHECK(std::abs(p.model.f0(0, 0).real() - std::sqrt(p.pauli_forms->g0_plus)) <= 1e-10);
}

TEST_CASE("sphere directions are unit and well spread") {
  for (int d = 1; d <= 3; ++d) {
    auto dirs = sphere_directions(d, 16);
    CHECK_FALSE(dirs.empty());
    for (const auto& t : dirs) CHECK(t.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(sphere_directions(1, 7).size() == 2);
}
