#pragma once

#include <complex>

#include <Eigen/Dense>

namespace carleman {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

/// 6x6 map from a boundary density (n_H, nu x t_E) to a field pair (E, H).
using KernelMatrix = Eigen::Matrix<cplx, 6, 6>;
using CVec6 = Eigen::Matrix<cplx, 6, 1>;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Bilinear cross product. Eigen's cross() conjugates its result for complex
/// scalars, which is not the vector-calculus product needed for fields.
template <typename A, typename B>
auto cross(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using S = decltype(a(0) * b(0));
  return Eigen::Matrix<S, 3, 1>(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

/// Cross-product matrix: cross_matrix(a) * b == cross(a, b).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 3> cross_matrix(const Eigen::MatrixBase<Derived>& a) {
  Eigen::Matrix<typename Derived::Scalar, 3, 3> m;
  using S = typename Derived::Scalar;
  m << S(0), -a(2), a(1),
       a(2), S(0), -a(0),
       -a(1), a(0), S(0);
  return m;
}

}  // namespace carleman
