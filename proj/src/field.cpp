#include "bh/field.hpp"

#include <cmath>
#include <numbers>

namespace bh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int total_size(const Eigen::VectorXi& shape) {
  int t = 1;
  for (int i = 0; i < shape.size(); ++i) t *= shape[i];
  return t;
}

// phase_table[axis][(kappa + cutoff) * N + n] = exp(sign * 2*pi*i * kappa * n / N)
std::vector<std::vector<cdouble>> phase_tables(const Eigen::VectorXi& grid_shape,
                                               const Eigen::VectorXi& cutoff, double sign) {
  const int d = static_cast<int>(grid_shape.size());
  std::vector<std::vector<cdouble>> tables(d);
  for (int ax = 0; ax < d; ++ax) {
    const int N = grid_shape[ax], K = cutoff[ax];
    tables[ax].resize(static_cast<size_t>(2 * K + 1) * N);
    for (int kappa = -K; kappa <= K; ++kappa)
      for (int n = 0; n < N; ++n) {
        double arg = sign * kTwoPi * kappa * n / N;
        tables[ax][static_cast<size_t>(kappa + K) * N + n] = {std::cos(arg), std::sin(arg)};
      }
  }
  return tables;
}

Eigen::VectorXi unflatten(int flat, const Eigen::VectorXi& shape) {
  const int d = static_cast<int>(shape.size());
  Eigen::VectorXi n(d);
  for (int i = d - 1; i >= 0; --i) {
    n[i] = flat % shape[i];
    flat /= shape[i];
  }
  return n;
}

}  // namespace

Eigen::VectorXi PeriodicField::grid_index(int flat) const {
  return unflatten(flat, grid_shape_);
}

Eigen::VectorXd PeriodicField::frac_coord(int flat) const {
  Eigen::VectorXi n = grid_index(flat);
  Eigen::VectorXd frac(n.size());
  for (int i = 0; i < n.size(); ++i) frac[i] = static_cast<double>(n[i]) / grid_shape_[i];
  return frac;
}

std::vector<MatrixXcd> PeriodicField::synthesize(int rows, int cols,
                                                 const Eigen::VectorXi& grid_shape,
                                                 const FrequencySet& freqs,
                                                 const std::vector<MatrixXcd>& coeffs) {
  const int d = static_cast<int>(grid_shape.size());
  const int total = total_size(grid_shape);
  auto tables = phase_tables(grid_shape, freqs.cutoff(), +1.0);
  std::vector<MatrixXcd> samples(total, MatrixXcd::Zero(rows, cols));
  for (int flat = 0; flat < total; ++flat) {
    Eigen::VectorXi n = unflatten(flat, grid_shape);
    MatrixXcd acc = MatrixXcd::Zero(rows, cols);
    for (int fi = 0; fi < freqs.size(); ++fi) {
      const Eigen::VectorXi& kappa = freqs.member(fi);
      cdouble phase(1.0, 0.0);
      for (int ax = 0; ax < d; ++ax)
        phase *= tables[ax][static_cast<size_t>(kappa[ax] + freqs.cutoff()[ax]) * grid_shape[ax] + n[ax]];
      acc += phase * coeffs[fi];
    }
    samples[flat] = acc;
  }
  return samples;
}

void PeriodicField::compute_fourier(const Eigen::VectorXi& cutoff) {
  const int d = dim();
  freqs_ = FrequencySet(cutoff);
  auto tables = phase_tables(grid_shape_, cutoff, -1.0);
  const int total = num_samples();
  fourier_.assign(freqs_.size(), MatrixXcd::Zero(rows_, cols_));
  for (int fi = 0; fi < freqs_.size(); ++fi) {
    const Eigen::VectorXi& kappa = freqs_.member(fi);
    MatrixXcd acc = MatrixXcd::Zero(rows_, cols_);
    for (int flat = 0; flat < total; ++flat) {
      Eigen::VectorXi n = unflatten(flat, grid_shape_);
      cdouble phase(1.0, 0.0);
      for (int ax = 0; ax < d; ++ax)
        phase *= tables[ax][static_cast<size_t>(kappa[ax] + cutoff[ax]) * grid_shape_[ax] + n[ax]];
      acc += phase * samples_[flat];
    }
    fourier_[fi] = acc / static_cast<double>(total);
  }
}

PeriodicField PeriodicField::from_fourier(int rows, int cols,
                                          const Eigen::VectorXi& grid_shape,
                                          const std::vector<std::pair<Eigen::VectorXi, MatrixXcd>>& coeffs) {
  PeriodicField f;
  f.rows_ = rows;
  f.cols_ = cols;
  f.grid_shape_ = grid_shape;
  const int d = static_cast<int>(grid_shape.size());
  Eigen::VectorXi cutoff = Eigen::VectorXi::Zero(d);
  for (const auto& [kappa, value] : coeffs) {
    if (kappa.size() != d) throw std::invalid_argument("coefficient index dimension mismatch");
    if (value.rows() != rows || value.cols() != cols)
      throw std::invalid_argument("coefficient shape mismatch");
    for (int ax = 0; ax < d; ++ax) {
      if (2 * std::abs(kappa[ax]) >= grid_shape[ax])
        throw std::invalid_argument("aliasing: coefficient index at or above the grid Nyquist bound");
      cutoff[ax] = std::max(cutoff[ax], std::abs(kappa[ax]));
    }
  }
  f.freqs_ = FrequencySet(cutoff);
  f.fourier_.assign(f.freqs_.size(), MatrixXcd::Zero(rows, cols));
  for (const auto& [kappa, value] : coeffs)
    f.fourier_[f.freqs_.index_of(kappa)] += value;
  f.samples_ = synthesize(rows, cols, grid_shape, f.freqs_, f.fourier_);
  return f;
}

PeriodicField PeriodicField::from_samples(int rows, int cols,
                                          const Eigen::VectorXi& grid_shape,
                                          const std::function<MatrixXcd(const Eigen::VectorXd&)>& gen,
                                          Eigen::VectorXi cutoff) {
  PeriodicField f;
  f.rows_ = rows;
  f.cols_ = cols;
  f.grid_shape_ = grid_shape;
  const int d = static_cast<int>(grid_shape.size());
  const int total = total_size(grid_shape);
  f.samples_.resize(total);
  for (int flat = 0; flat < total; ++flat) {
    Eigen::VectorXi n = unflatten(flat, grid_shape);
    Eigen::VectorXd frac(d);
    for (int i = 0; i < d; ++i) frac[i] = static_cast<double>(n[i]) / grid_shape[i];
    f.samples_[flat] = gen(frac);
    if (f.samples_[flat].rows() != rows || f.samples_[flat].cols() != cols)
      throw std::invalid_argument("generator returned wrong shape");
  }
  if (cutoff.size() == 0) {
    cutoff.resize(d);
    for (int i = 0; i < d; ++i) cutoff[i] = (grid_shape[i] - 1) / 2;
  }
  for (int i = 0; i < d; ++i)
    if (2 * cutoff[i] >= grid_shape[i])
      throw std::invalid_argument("cutoff at or above the grid Nyquist bound");
  f.compute_fourier(cutoff);
  return f;
}

PeriodicField PeriodicField::constant(const MatrixXcd& value, const Eigen::VectorXi& grid_shape) {
  return from_fourier(static_cast<int>(value.rows()), static_cast<int>(value.cols()), grid_shape,
                      {{Eigen::VectorXi::Zero(grid_shape.size()), value}});
}

PeriodicField PeriodicField::identity(int n, const Eigen::VectorXi& grid_shape) {
  return constant(MatrixXcd::Identity(n, n), grid_shape);
}

MatrixXcd PeriodicField::fourier(const Eigen::VectorXi& kappa) const {
  int idx = freqs_.index_of(kappa);
  if (idx < 0) return MatrixXcd::Zero(rows_, cols_);
  return fourier_[idx];
}

MatrixXcd PeriodicField::mean() const {
  return fourier_[freqs_.zero_index()];
}

MatrixXcd PeriodicField::harmonic_mean() const {
  return inverse().mean().inverse();
}

double PeriodicField::sup_norm() const {
  double m = 0.0;
  for (const auto& s : samples_) {
    Eigen::JacobiSVD<MatrixXcd> svd(s);
    m = std::max(m, svd.singularValues()[0]);
  }
  return m;
}

double PeriodicField::min_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : samples_) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (s + s.adjoint()), Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues().minCoeff());
  }
  return m;
}

bool PeriodicField::is_hermitian(double tol) const {
  for (const auto& s : samples_)
    if ((s - s.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

double PeriodicField::max_real_deviation() const {
  double m = 0.0;
  for (const auto& s : samples_) m = std::max(m, s.imag().cwiseAbs().maxCoeff());
  return m;
}

PeriodicField PeriodicField::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("pointwise inverse needs a square field");
  PeriodicField f;
  f.rows_ = rows_;
  f.cols_ = cols_;
  f.grid_shape_ = grid_shape_;
  f.samples_.resize(samples_.size());
  for (size_t i = 0; i < samples_.size(); ++i) {
    Eigen::FullPivLU<MatrixXcd> lu(samples_[i]);
    if (!lu.isInvertible()) {
      Eigen::VectorXi n = grid_index(static_cast<int>(i));
      std::string where;
      for (int ax = 0; ax < n.size(); ++ax)
        where += (ax ? "," : "") + std::to_string(n[ax]);
      throw std::runtime_error("field is singular at grid point (" + where + ")");
    }
    f.samples_[i] = lu.inverse();
  }
  Eigen::VectorXi cutoff(dim());
  for (int i = 0; i < dim(); ++i) cutoff[i] = (grid_shape_[i] - 1) / 2;
  f.compute_fourier(cutoff);
  return f;
}

PeriodicField PeriodicField::sqrt_psd() const {
  return map(
      [](const MatrixXcd& s) -> MatrixXcd {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (s + s.adjoint()));
        if (es.eigenvalues().minCoeff() < -1e-12)
          throw std::runtime_error("sqrt of a non-PSD sample");
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
      },
      rows_, cols_);
}

PeriodicField PeriodicField::adjoint() const {
  return map([](const MatrixXcd& s) { return MatrixXcd(s.adjoint()); }, cols_, rows_);
}

PeriodicField PeriodicField::map(const std::function<MatrixXcd(const MatrixXcd&)>& op,
                                 int rows, int cols, Eigen::VectorXi cutoff) const {
  PeriodicField f;
  f.rows_ = rows;
  f.cols_ = cols;
  f.grid_shape_ = grid_shape_;
  f.samples_.resize(samples_.size());
  for (size_t i = 0; i < samples_.size(); ++i) {
    f.samples_[i] = op(samples_[i]);
    if (f.samples_[i].rows() != rows || f.samples_[i].cols() != cols)
      throw std::invalid_argument("map returned wrong shape");
  }
  if (cutoff.size() == 0) {
    cutoff.resize(dim());
    for (int i = 0; i < dim(); ++i) cutoff[i] = (grid_shape_[i] - 1) / 2;
  }
  f.compute_fourier(cutoff);
  return f;
}

PeriodicField PeriodicField::resample(const Eigen::VectorXi& grid_shape) const {
  PeriodicField f;
  f.rows_ = rows_;
  f.cols_ = cols_;
  f.grid_shape_ = grid_shape;
  for (int i = 0; i < dim(); ++i)
    if (2 * freqs_.cutoff()[i] >= grid_shape[i])
      throw std::invalid_argument("resample grid too coarse for the stored bandwidth");
  f.freqs_ = freqs_;
  f.fourier_ = fourier_;
  f.samples_ = synthesize(rows_, cols_, grid_shape, freqs_, fourier_);
  return f;
}

PeriodicField PeriodicField::as_trig_poly() const {
  PeriodicField f;
  f.rows_ = rows_;
  f.cols_ = cols_;
  f.grid_shape_ = grid_shape_;
  f.freqs_ = freqs_;
  f.fourier_ = fourier_;
  f.samples_ = synthesize(rows_, cols_, grid_shape_, freqs_, fourier_);
  return f;
}

PeriodicField PeriodicField::multiply(const PeriodicField& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("pointwise product shape mismatch");
  if (dim() != other.dim()) throw std::invalid_argument("pointwise product dimension mismatch");
  const int d = dim();
  // product bandwidth is the sum of the operand bandwidths; pick a grid that
  // resolves it so the transform of the product is alias-free
  Eigen::VectorXi prod_cut(d), target(d);
  for (int i = 0; i < d; ++i) {
    prod_cut[i] = freqs_.cutoff()[i] + other.freqs_.cutoff()[i];
    target[i] = std::max({grid_shape_[i], other.grid_shape_[i], 2 * prod_cut[i] + 1});
  }
  const PeriodicField a = (target == grid_shape_) ? *this : resample(target);
  const PeriodicField b = (target == other.grid_shape_) ? other : other.resample(target);
  PeriodicField f;
  f.rows_ = rows_;
  f.cols_ = other.cols_;
  f.grid_shape_ = target;
  f.samples_.resize(a.samples_.size());
  for (size_t i = 0; i < a.samples_.size(); ++i) f.samples_[i] = a.samples_[i] * b.samples_[i];
  f.compute_fourier(prod_cut);
  return f;
}

PeriodicField PeriodicField::add(const PeriodicField& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("pointwise sum shape mismatch");
  const int d = dim();
  Eigen::VectorXi cut(d), target(d);
  for (int i = 0; i < d; ++i) {
    cut[i] = std::max(freqs_.cutoff()[i], other.freqs_.cutoff()[i]);
    target[i] = std::max(grid_shape_[i], other.grid_shape_[i]);
  }
  const PeriodicField a = (target == grid_shape_) ? *this : resample(target);
  const PeriodicField b = (target == other.grid_shape_) ? other : other.resample(target);
  PeriodicField f;
  f.rows_ = rows_;
  f.cols_ = cols_;
  f.grid_shape_ = target;
  f.samples_.resize(a.samples_.size());
  for (size_t i = 0; i < a.samples_.size(); ++i) f.samples_[i] = a.samples_[i] + b.samples_[i];
  f.compute_fourier(cut);
  return f;
}

PeriodicField PeriodicField::scale(const cdouble& a) const {
  PeriodicField f = *this;
  for (auto& s : f.samples_) s *= a;
  for (auto& c : f.fourier_) c *= a;
  return f;
}

double PeriodicField::parseval_defect() const {
  double sample_energy = 0.0;
  for (const auto& s : samples_) sample_energy += s.squaredNorm();
  sample_energy /= static_cast<double>(samples_.size());
  double coeff_energy = 0.0;
  for (const auto& c : fourier_) coeff_energy += c.squaredNorm();
  double scale = std::max({sample_energy, coeff_energy, 1e-300});
  return std::abs(sample_energy - coeff_energy) / scale;
}

}  // namespace bh
