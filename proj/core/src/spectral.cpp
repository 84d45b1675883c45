#include "yamabe/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "yamabe/errors.hpp"

namespace yamabe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

// Multiplies each mode k by the factor m(k); the Nyquist cosine keeps m(N/2).
template <typename Multiplier>
Eigen::VectorXd scale_modes(const Eigen::VectorXd& coefficients, Multiplier m) {
  const int n = static_cast<int>(coefficients.size());
  Eigen::VectorXd out(n);
  out[0] = m(0) * coefficients[0];
  for (int k = 1; k < n / 2; ++k) {
    out[2 * k - 1] = m(k) * coefficients[2 * k - 1];
    out[2 * k] = m(k) * coefficients[2 * k];
  }
  out[n - 1] = m(n / 2) * coefficients[n - 1];
  return out;
}

}  // namespace

Grid::Grid(int size, double circle_length, double sphere_volume)
    : size_(size), circle_length_(circle_length), sphere_volume_(sphere_volume) {
  if (size < 8 || size % 2 != 0) {
    throw DomainError("grid size must be an even integer >= 8, got " + std::to_string(size));
  }
  if (!(circle_length > 0.0)) throw DomainError("circle length must be positive");
  if (!(sphere_volume > 0.0)) throw DomainError("sphere volume must be positive");
  weight_ = sphere_volume_ * circle_length_ * kTwoPi / size_;
}

double Grid::angle(int j) const { return kTwoPi * j / size_; }

bool Grid::operator==(const Grid& other) const {
  return size_ == other.size_ && circle_length_ == other.circle_length_ &&
         sphere_volume_ == other.sphere_volume_;
}

GridPtr make_grid(int size, double circle_length, double sphere_volume) {
  return std::make_shared<const Grid>(size, circle_length, sphere_volume);
}

Field::Field(GridPtr grid, Eigen::VectorXd values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw DomainError("field requires a grid");
  if (values_.size() != grid_->size()) {
    throw DomainError("field has " + std::to_string(values_.size()) + " values on a grid of " +
                      std::to_string(grid_->size()) + " nodes");
  }
}

Field Field::constant(GridPtr grid, double value) {
  const int n = grid->size();
  return Field(std::move(grid), Eigen::VectorXd::Constant(n, value));
}

Field Field::from_function(GridPtr grid, const std::function<double(double)>& f) {
  Eigen::VectorXd v(grid->size());
  for (int j = 0; j < grid->size(); ++j) v[j] = f(grid->angle(j));
  return Field(std::move(grid), std::move(v));
}

Field Field::from_coefficients(GridPtr grid, const Eigen::VectorXd& coefficients) {
  if (coefficients.size() != grid->size()) throw DomainError("coefficient count does not match grid");
  return Field(std::move(grid), inverse_transform(coefficients));
}

Eigen::VectorXd Field::coefficients() const { return forward_transform(values_); }

double Field::value_at(double theta) const {
  const Eigen::VectorXd c = coefficients();
  const int n = size();
  double s = c[0];
  for (int k = 1; k < n / 2; ++k) {
    s += c[2 * k - 1] * std::cos(k * theta) + c[2 * k] * std::sin(k * theta);
  }
  s += c[n - 1] * std::cos(0.5 * n * theta);
  return s;
}

Field Field::pow(double exponent) const {
  return Field(grid_, values_.array().pow(exponent).matrix());
}

Field Field::map(const std::function<double(double)>& f) const {
  Eigen::VectorXd v(values_.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = f(values_[j]);
  return Field(grid_, std::move(v));
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  values_ += other.values_;
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  values_ -= other.values_;
  return *this;
}

Field& Field::operator*=(double s) {
  values_ *= s;
  return *this;
}

Field operator*(const Field& a, const Field& b) {
  require_same_grid(a, b);
  return Field(a.grid(), a.values().cwiseProduct(b.values()));
}

Field operator/(const Field& a, const Field& b) {
  require_same_grid(a, b);
  return Field(a.grid(), a.values().cwiseQuotient(b.values()));
}

void require_same_grid(const Field& a, const Field& b) {
  if (a.grid() != b.grid() && !(*a.grid() == *b.grid())) {
    throw DomainError("fields live on different grids");
  }
}

Eigen::VectorXd forward_transform(const Eigen::VectorXd& values) {
  const int n = static_cast<int>(values.size());
  std::vector<double> in(values.data(), values.data() + n);
  std::vector<std::complex<double>> out;
  fft_engine().fwd(out, in);
  Eigen::VectorXd c(n);
  c[0] = out[0].real() / n;
  for (int k = 1; k < n / 2; ++k) {
    c[2 * k - 1] = 2.0 * out[k].real() / n;
    c[2 * k] = -2.0 * out[k].imag() / n;
  }
  c[n - 1] = out[n / 2].real() / n;
  return c;
}

Eigen::VectorXd inverse_transform(const Eigen::VectorXd& coefficients) {
  const int n = static_cast<int>(coefficients.size());
  std::vector<std::complex<double>> spec(n);
  spec[0] = coefficients[0] * n;
  for (int k = 1; k < n / 2; ++k) {
    const std::complex<double> z(0.5 * n * coefficients[2 * k - 1], -0.5 * n * coefficients[2 * k]);
    spec[k] = z;
    spec[n - k] = std::conj(z);
  }
  spec[n / 2] = coefficients[n - 1] * n;
  std::vector<double> out;
  fft_engine().inv(out, spec);
  return Eigen::Map<const Eigen::VectorXd>(out.data(), n);
}

Field derivative(const Field& f) {
  const Eigen::VectorXd c = f.coefficients();
  const int n = f.size();
  const double inv_len = 1.0 / f.grid()->circle_length();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  for (int k = 1; k < n / 2; ++k) {
    d[2 * k - 1] = k * inv_len * c[2 * k];
    d[2 * k] = -k * inv_len * c[2 * k - 1];
  }
  return Field::from_coefficients(f.grid(), d);
}

Field laplacian(const Field& f) {
  const double inv_len = 1.0 / f.grid()->circle_length();
  const Eigen::VectorXd c =
      scale_modes(f.coefficients(), [inv_len](int k) { return -(k * inv_len) * (k * inv_len); });
  return Field::from_coefficients(f.grid(), c);
}

double integrate(const Field& f) { return f.grid()->weight() * f.values().sum(); }

double l2_inner(const Field& f, const Field& h) {
  require_same_grid(f, h);
  return f.grid()->weight() * f.values().dot(h.values());
}

double dirichlet_inner(const Field& f, const Field& h) {
  require_same_grid(f, h);
  return -f.grid()->weight() * laplacian(f).values().dot(h.values());
}

double w12_inner(const Field& f, const Field& h) { return l2_inner(f, h) + dirichlet_inner(f, h); }

InnerProducts inner_products(const Field& f, const Field& h) {
  const double l2 = l2_inner(f, h);
  return {l2, l2 + dirichlet_inner(f, h)};
}

double l2_norm(const Field& f) { return std::sqrt(l2_inner(f, f)); }

double w12_norm(const Field& f) { return std::sqrt(std::max(0.0, w12_inner(f, f))); }

Field rotate(const Field& f, double angle) {
  const Eigen::VectorXd c = f.coefficients();
  const int n = f.size();
  Eigen::VectorXd r(n);
  r[0] = c[0];
  for (int k = 1; k < n / 2; ++k) {
    const double ck = std::cos(k * angle);
    const double sk = std::sin(k * angle);
    r[2 * k - 1] = c[2 * k - 1] * ck - c[2 * k] * sk;
    r[2 * k] = c[2 * k - 1] * sk + c[2 * k] * ck;
  }
  r[n - 1] = c[n - 1] * std::cos(0.5 * n * angle);
  return Field::from_coefficients(f.grid(), r);
}

Field resample(const Field& f, int new_size) {
  const Grid& g = *f.grid();
  GridPtr target = make_grid(new_size, g.circle_length(), g.sphere_volume());
  const Eigen::VectorXd c = f.coefficients();
  const int n = f.size();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(new_size);
  const int shared = std::min(n, new_size) / 2;
  r[0] = c[0];
  for (int k = 1; k < shared; ++k) {
    r[2 * k - 1] = c[2 * k - 1];
    r[2 * k] = c[2 * k];
  }
  if (new_size > n) {
    r[2 * shared - 1] = c[n - 1];  // old Nyquist becomes an ordinary cosine mode
  } else {
    r[new_size - 1] = c[2 * shared - 1];
  }
  return Field::from_coefficients(target, r);
}

Eigen::MatrixXd laplacian_matrix(const Grid& grid) {
  const int n = grid.size();
  GridPtr shared = std::make_shared<const Grid>(grid);
  Eigen::MatrixXd d(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int m = 0; m < n; ++m) {
    e[m] = 1.0;
    d.col(m) = laplacian(Field(shared, e)).values();
    e[m] = 0.0;
  }
  return 0.5 * (d + d.transpose());
}

}  // namespace yamabe
