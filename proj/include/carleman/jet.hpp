#pragma once

#include <array>

#include "carleman/types.hpp"

namespace carleman {

/// Second-order jet of a scalar function of a point in R^3: value, gradient
/// and Hessian. Closed under +, - and *, which is all the polynomial
/// recurrences for solid harmonics need.
template <typename T>
struct Jet {
  T value{};
  std::array<T, 3> grad{};
  std::array<std::array<T, 3>, 3> hess{};

  Jet() = default;
  explicit Jet(T v) : value(v) {}

  /// Coordinate function x_axis.
  static Jet coordinate(int axis, double at) {
    Jet j;
    j.value = T(at);
    j.grad[axis] = T(1);
    return j;
  }

  Jet& operator+=(const Jet& o) {
    value += o.value;
    for (int a = 0; a < 3; ++a) {
      grad[a] += o.grad[a];
      for (int b = 0; b < 3; ++b) hess[a][b] += o.hess[a][b];
    }
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    value -= o.value;
    for (int a = 0; a < 3; ++a) {
      grad[a] -= o.grad[a];
      for (int b = 0; b < 3; ++b) hess[a][b] -= o.hess[a][b];
    }
    return *this;
  }
  template <typename S>
  Jet& operator*=(const S& s) {
    value *= s;
    for (int a = 0; a < 3; ++a) {
      grad[a] *= s;
      for (int b = 0; b < 3; ++b) hess[a][b] *= s;
    }
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.value = a.value * b.value;
    for (int i = 0; i < 3; ++i) r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r.hess[i][j] = a.hess[i][j] * b.value + a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i] +
                       a.value * b.hess[i][j];
    return r;
  }

  Eigen::Matrix<T, 3, 1> gradient() const { return {grad[0], grad[1], grad[2]}; }
  Eigen::Matrix<T, 3, 3> hessian() const {
    Eigen::Matrix<T, 3, 3> h;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) h(i, j) = hess[i][j];
    return h;
  }
  T laplacian() const { return hess[0][0] + hess[1][1] + hess[2][2]; }
};

using RealJet = Jet<double>;
using ComplexJet = Jet<cplx>;

/// Product of a complex jet with a real jet.
inline ComplexJet mul(const ComplexJet& a, const RealJet& b) {
  ComplexJet r;
  r.value = a.value * b.value;
  for (int i = 0; i < 3; ++i) r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.hess[i][j] = a.hess[i][j] * b.value + a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i] +
                     a.value * b.hess[i][j];
  return r;
}

/// a += s * b for a complex scalar s and real jet b.
inline void axpy(ComplexJet& a, cplx s, const RealJet& b) {
  a.value += s * b.value;
  for (int i = 0; i < 3; ++i) {
    a.grad[i] += s * b.grad[i];
    for (int j = 0; j < 3; ++j) a.hess[i][j] += s * b.hess[i][j];
  }
}

}  // namespace carleman
