#pragma once

// Special functions for the Helmholtz operator in R^3: the fundamental
// solution and its derivatives, spherical Bessel/Hankel functions of complex
// argument, real orthonormal spherical harmonics, the radial solutions of the
// separated Helmholtz equation in R^n and the harmonic dimension count.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "carleman/jet.hpp"
#include "carleman/types.hpp"

namespace carleman {

/// Complex wave constant with Im k >= 0.
class WaveNumber {
 public:
  WaveNumber() = default;
  explicit WaveNumber(cplx k) : k_(k) {
    if (!(std::isfinite(k.real()) && std::isfinite(k.imag())))
      throw std::domain_error("wave number must be finite");
    if (k.imag() < 0.0) throw std::domain_error("wave number must satisfy Im k >= 0");
  }
  WaveNumber(double re, double im = 0.0) : WaveNumber(cplx(re, im)) {}

  cplx value() const { return k_; }
  bool is_zero() const { return k_ == cplx(0.0); }

  /// Throws unless k != 0; every kernel and parametrix formula divides by ik.
  void require_nonzero(const char* where) const {
    if (is_zero()) throw std::domain_error(std::string(where) + ": wave number k must be nonzero");
  }

 private:
  cplx k_{1.0, 0.0};
};

/// Spherical harmonic label: degree nu, order index j in 1..J(nu, n).
/// In R^3 the order index j corresponds to m = j - nu - 1 in -nu..nu.
struct HarmonicIndex {
  int nu = 0;
  int j = 1;
  int n = 3;

  void validate() const;
  /// Flat position in a degree-major table, nu^2 + j - 1 (n = 3 only).
  int flat() const { return nu * nu + j - 1; }
};

inline int flat_index(int nu, int j) { return nu * nu + j - 1; }
inline int table_size(int max_degree) { return (max_degree + 1) * (max_degree + 1); }

// ---------------------------------------------------------------------------
// Helmholtz fundamental solution e(x) = -exp(ik|x|) / (4 pi |x|)

struct HelmholtzDerivatives {
  cplx value;
  CVec3 gradient;
  CMat3 hessian;
};

/// e(x) with gradient and Hessian. Requires |x| > 0 and Im k >= 0; k = 0
/// gives the Newtonian kernel.
HelmholtzDerivatives helmholtz_fundamental(const Vec3& x, const WaveNumber& k);

cplx helmholtz_value(const Vec3& x, const WaveNumber& k);

// ---------------------------------------------------------------------------
// Spherical Bessel and Hankel functions

/// j_nu(z) for nu = 0..max_degree. Power series for small |z|, Miller
/// downward recurrence otherwise.
std::vector<cplx> spherical_bessel_j_all(int max_degree, cplx z);
cplx spherical_bessel_j(int nu, cplx z);

/// j_nu(z) / z^nu for nu = 0..max_degree, regular at z = 0.
std::vector<cplx> spherical_bessel_j_scaled_all(int max_degree, cplx z);

/// h^(1)_nu(z) for nu = 0..max_degree by upward recurrence. Domain error at z = 0.
std::vector<cplx> spherical_hankel_h1_all(int max_degree, cplx z);
cplx spherical_hankel_h1(int nu, cplx z);

// ---------------------------------------------------------------------------
// Real orthonormal spherical harmonics on S^2

/// Real solid harmonics r^nu Y_nu^(j)(x/r) for nu = 0..max_degree, stored at
/// flat_index(nu, j). Evaluated by Cartesian recurrences without dividing by
/// r, so T may be a jet to obtain exact derivatives.
template <typename T>
std::vector<T> solid_harmonics(int max_degree, const T& x, const T& y, const T& z) {
  const int size = table_size(max_degree);
  std::vector<T> out(static_cast<std::size_t>(size));
  const T r2 = x * x + y * y + z * z;

  // Sectoral factors Re/Im (x + iy)^m.
  std::vector<T> cm(static_cast<std::size_t>(max_degree + 1)), sm(static_cast<std::size_t>(max_degree + 1));
  cm[0] = T(1.0);
  sm[0] = T(0.0);
  for (int m = 1; m <= max_degree; ++m) {
    cm[m] = x * cm[m - 1] - y * sm[m - 1];
    sm[m] = x * sm[m - 1] + y * cm[m - 1];
  }

  // Normalised associated Legendre part as a polynomial in z and r^2.
  double diag = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= max_degree; ++m) {
    if (m > 0) diag *= std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    const double mscale = (m == 0) ? 1.0 : std::sqrt(2.0);
    T p_mm = T(1.0) * diag;
    T p_lm2 = p_mm;  // P_{l-2}
    T p_lm1 = p_mm;  // P_{l-1}
    for (int l = m; l <= max_degree; ++l) {
      T p;
      if (l == m) {
        p = p_mm;
      } else if (l == m + 1) {
        p = std::sqrt(2.0 * m + 3.0) * (z * p_mm);
        p_lm2 = p_mm;
      } else {
        const double ll = l, mm = m;
        const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
        const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) * (2.0 * ll + 1.0) /
                                   ((2.0 * ll - 3.0) * (ll * ll - mm * mm)));
        p = a * (z * p_lm1) - b * (r2 * p_lm2);
        p_lm2 = p_lm1;
      }
      p_lm1 = p;
      if (m == 0) {
        out[static_cast<std::size_t>(flat_index(l, l + 1))] = p;
      } else {
        out[static_cast<std::size_t>(flat_index(l, l + m + 1))] = mscale * (p * cm[m]);
        out[static_cast<std::size_t>(flat_index(l, l - m + 1))] = mscale * (p * sm[m]);
      }
    }
  }
  return out;
}

/// All real spherical harmonics up to max_degree at a unit vector.
std::vector<double> spherical_harmonics_all(int max_degree, const Vec3& omega);

/// h_nu^(j)(omega). Domain error unless | |omega| - 1 | <= 1e-12.
double spherical_harmonic(const HarmonicIndex& idx, const Vec3& omega);

/// Solid harmonics with first and second derivatives at x.
std::vector<RealJet> solid_harmonic_jets(int max_degree, const Vec3& x);

// ---------------------------------------------------------------------------
// Radial solutions and dimension count

/// Bounded solution of ((r d/dr)^2 + (n-2) r d/dr + k^2 r^2 - nu(nu+n-2)) g = 0.
/// n = 3: g = j_nu(kr). Otherwise g = (kr)^{-(n-2)/2} J_{nu+(n-2)/2}(kr) by its
/// power series (intended for |kr| up to about 20).
cplx radial_solution_g(int nu, int n, double r, const WaveNumber& k);

/// J(nu, n) = (2nu+n-2)(nu+n-3)! / ((n-2)! nu!).
long long harmonic_dimension(int nu, int n);

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Gauss-Legendre panels on [a, b] refined geometrically toward `toward`
/// (either a or b) so that the smallest panel has width about `finest`.
QuadratureRule graded_gauss_legendre(double a, double b, double toward, double finest, int order);

struct SphereRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
};

/// Product rule on the unit sphere: n-point Gauss-Legendre in cos(theta)
/// times a 2n-point trapezoid in phi. Exact for harmonics of degree <= 2n-1.
SphereRule sphere_rule(int n);

}  // namespace carleman
