#pragma once

// Periodic spectral calculus on the circle factor S^1(L) of S^1(L) x S^{n-1}.
//
// A Field is a function of the circle coordinate only, stored by its values at
// N equally spaced collocation nodes theta_j = 2*pi*j/N (arclength L*theta_j).
// Its real trigonometric coefficients are laid out as
//
//   c[0]        mean
//   c[2k-1]     cos(k theta),  1 <= k < N/2
//   c[2k]       sin(k theta),  1 <= k < N/2
//   c[N-1]      cos(N/2 theta)            (Nyquist)
//
// Integrals are over the whole product manifold, so every quadrature carries
// the factor omega_{n-1} = vol(S^{n-1}).

#include <Eigen/Core>

#include <functional>
#include <memory>

namespace yamabe {

class Grid {
 public:
  Grid(int size, double circle_length, double sphere_volume);

  int size() const { return size_; }
  double circle_length() const { return circle_length_; }
  double sphere_volume() const { return sphere_volume_; }
  int mode_cutoff() const { return size_ / 2; }

  // Quadrature weight of a single node (all nodes share it).
  double weight() const { return weight_; }
  double volume() const { return weight_ * size_; }

  double angle(int j) const;
  double arclength(int j) const { return circle_length_ * angle(j); }

  bool operator==(const Grid& other) const;

 private:
  int size_;
  double circle_length_;
  double sphere_volume_;
  double weight_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int size, double circle_length, double sphere_volume);

class Field {
 public:
  Field(GridPtr grid, Eigen::VectorXd values);

  static Field constant(GridPtr grid, double value);
  // f is evaluated at the node angles theta_j.
  static Field from_function(GridPtr grid, const std::function<double(double)>& f);
  static Field from_coefficients(GridPtr grid, const Eigen::VectorXd& coefficients);

  const GridPtr& grid() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](int j) const { return values_[j]; }

  Eigen::VectorXd coefficients() const;

  // Trigonometric interpolant evaluated at an arbitrary angle.
  double value_at(double theta) const;

  double min() const { return values_.minCoeff(); }
  double max() const { return values_.maxCoeff(); }

  Field pow(double exponent) const;
  Field map(const std::function<double(double)>& f) const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, double s) { return a *= s; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend Field operator/(Field a, double s) { return a *= 1.0 / s; }
  friend Field operator-(Field a) { return a *= -1.0; }
  // Pointwise product and quotient at the nodes.
  friend Field operator*(const Field& a, const Field& b);
  friend Field operator/(const Field& a, const Field& b);

 private:
  GridPtr grid_;
  Eigen::VectorXd values_;
};

void require_same_grid(const Field& a, const Field& b);

Eigen::VectorXd forward_transform(const Eigen::VectorXd& values);
Eigen::VectorXd inverse_transform(const Eigen::VectorXd& coefficients);

// Derivative with respect to arclength. The Nyquist mode is dropped.
Field derivative(const Field& f);
// Laplacian of S^1(L) x S^{n-1} acting on circle-dependent functions.
Field laplacian(const Field& f);

double integrate(const Field& f);

struct InnerProducts {
  double l2 = 0.0;
  double w12 = 0.0;
};

InnerProducts inner_products(const Field& f, const Field& h);
double l2_inner(const Field& f, const Field& h);
// int grad f . grad h, taken as <-Laplacian f, h> so that it is the exact
// bilinear form of the discrete Laplacian.
double dirichlet_inner(const Field& f, const Field& h);
double w12_inner(const Field& f, const Field& h);
double l2_norm(const Field& f);
double w12_norm(const Field& f);

// f(theta - angle), exact on the trigonometric interpolant.
Field rotate(const Field& f, double angle);
// Trigonometric interpolation onto a grid of another size.
Field resample(const Field& f, int new_size);

// Dense nodal matrix of the Laplacian: (D * values) == laplacian(f).values().
Eigen::MatrixXd laplacian_matrix(const Grid& grid);

}  // namespace yamabe
