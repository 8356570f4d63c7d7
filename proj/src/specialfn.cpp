#include "carleman/specialfn.hpp"

#include <algorithm>
#include <string>

namespace carleman {

void HarmonicIndex::validate() const {
  if (n < 3) throw std::invalid_argument("harmonic index: dimension n must be >= 3");
  if (nu < 0) throw std::invalid_argument("harmonic index: degree must be nonnegative");
  const long long dim = harmonic_dimension(nu, n);
  if (j < 1 || j > dim)
    throw std::invalid_argument("harmonic index: order j=" + std::to_string(j) + " outside 1.." +
                                std::to_string(dim));
}

HelmholtzDerivatives helmholtz_fundamental(const Vec3& x, const WaveNumber& k) {
  const double r = x.norm();
  if (!(r > 0.0)) throw std::domain_error("helmholtz_fundamental: |x| must be positive");
  const cplx kk = k.value();
  const cplx e = -std::exp(I * kk * r) / (4.0 * kPi * r);
  const cplx a = I * kk - 1.0 / r;
  const cplx de = e * a;
  const cplx d2e = e * (a * a + 1.0 / (r * r));

  const Vec3 u = x / r;
  HelmholtzDerivatives out;
  out.value = e;
  out.gradient = de * u.cast<cplx>();
  const Eigen::Matrix3d uu = u * u.transpose();
  out.hessian = d2e * uu.cast<cplx>() + (de / r) * (Eigen::Matrix3d::Identity() - uu).cast<cplx>();
  return out;
}

cplx helmholtz_value(const Vec3& x, const WaveNumber& k) {
  const double r = x.norm();
  if (!(r > 0.0)) throw std::domain_error("helmholtz_fundamental: |x| must be positive");
  return -std::exp(I * k.value() * r) / (4.0 * kPi * r);
}

namespace {

// sum_s (-z^2/2)^s / (s! (2nu+3)(2nu+5)...(2nu+2s+1)), i.e. (2nu+1)!! j_nu(z) / z^nu.
cplx bessel_series_core(int nu, cplx z) {
  const cplx w = -0.5 * z * z;
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int s = 1; s < 200; ++s) {
    term *= w / (double(s) * (2.0 * nu + 2.0 * s + 1.0));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

std::vector<cplx> bessel_miller(int max_degree, cplx z) {
  const int start = max_degree + static_cast<int>(std::abs(z)) + 40;
  std::vector<cplx> f(static_cast<std::size_t>(start + 2), cplx(0.0));
  f[static_cast<std::size_t>(start)] = 1e-30;
  for (int nu = start; nu >= 1; --nu) {
    const auto i = static_cast<std::size_t>(nu);
    f[i - 1] = (2.0 * nu + 1.0) / z * f[i] - f[i + 1];
    if (std::abs(f[i - 1]) > 1e200)
      for (std::size_t m = i - 1; m < f.size(); ++m) f[m] *= 1e-200;
  }
  const cplx j0 = std::sin(z) / z;
  const cplx j1 = std::sin(z) / (z * z) - std::cos(z) / z;
  const cplx scale = (std::abs(j0) >= std::abs(j1)) ? j0 / f[0] : j1 / f[1];
  std::vector<cplx> out(static_cast<std::size_t>(max_degree + 1));
  for (int nu = 0; nu <= max_degree; ++nu) out[static_cast<std::size_t>(nu)] = f[static_cast<std::size_t>(nu)] * scale;
  return out;
}

}  // namespace

std::vector<cplx> spherical_bessel_j_all(int max_degree, cplx z) {
  if (max_degree < 0) throw std::invalid_argument("spherical_bessel_j: negative degree");
  std::vector<cplx> out(static_cast<std::size_t>(max_degree + 1), cplx(0.0));
  if (std::abs(z) <= 1.0) {
    cplx lead = 1.0;  // z^nu / (2nu+1)!!
    for (int nu = 0; nu <= max_degree; ++nu) {
      if (nu > 0) lead *= z / (2.0 * nu + 1.0);
      out[static_cast<std::size_t>(nu)] = lead * bessel_series_core(nu, z);
    }
    return out;
  }
  return bessel_miller(max_degree, z);
}

cplx spherical_bessel_j(int nu, cplx z) { return spherical_bessel_j_all(nu, z)[static_cast<std::size_t>(nu)]; }

std::vector<cplx> spherical_bessel_j_scaled_all(int max_degree, cplx z) {
  if (max_degree < 0) throw std::invalid_argument("spherical_bessel_j: negative degree");
  std::vector<cplx> out(static_cast<std::size_t>(max_degree + 1));
  if (std::abs(z) <= 1.0) {
    double dfact = 1.0;  // (2nu+1)!!
    for (int nu = 0; nu <= max_degree; ++nu) {
      if (nu > 0) dfact *= 2.0 * nu + 1.0;
      out[static_cast<std::size_t>(nu)] = bessel_series_core(nu, z) / dfact;
    }
    return out;
  }
  const auto j = bessel_miller(max_degree, z);
  cplx zp = 1.0;
  for (int nu = 0; nu <= max_degree; ++nu) {
    out[static_cast<std::size_t>(nu)] = j[static_cast<std::size_t>(nu)] / zp;
    zp *= z;
  }
  return out;
}

std::vector<cplx> spherical_hankel_h1_all(int max_degree, cplx z) {
  if (max_degree < 0) throw std::invalid_argument("spherical_hankel_h1: negative degree");
  if (z == cplx(0.0)) throw std::domain_error("spherical_hankel_h1: z must be nonzero");
  std::vector<cplx> h(static_cast<std::size_t>(std::max(max_degree, 1) + 1));
  const cplx eiz = std::exp(I * z);
  h[0] = -I * eiz / z;
  h[1] = -eiz * (z + I) / (z * z);
  for (int nu = 1; nu < max_degree; ++nu)
    h[static_cast<std::size_t>(nu + 1)] = (2.0 * nu + 1.0) / z * h[static_cast<std::size_t>(nu)] - h[static_cast<std::size_t>(nu - 1)];
  h.resize(static_cast<std::size_t>(max_degree + 1));
  return h;
}

cplx spherical_hankel_h1(int nu, cplx z) { return spherical_hankel_h1_all(nu, z)[static_cast<std::size_t>(nu)]; }

std::vector<double> spherical_harmonics_all(int max_degree, const Vec3& omega) {
  if (std::abs(omega.norm() - 1.0) > 1e-12)
    throw std::domain_error("spherical_harmonic: direction must be a unit vector");
  return solid_harmonics<double>(max_degree, omega.x(), omega.y(), omega.z());
}

double spherical_harmonic(const HarmonicIndex& idx, const Vec3& omega) {
  idx.validate();
  if (idx.n != 3) throw std::invalid_argument("spherical_harmonic: only n = 3 is supported");
  return spherical_harmonics_all(idx.nu, omega)[static_cast<std::size_t>(idx.flat())];
}

std::vector<RealJet> solid_harmonic_jets(int max_degree, const Vec3& x) {
  return solid_harmonics<RealJet>(max_degree, RealJet::coordinate(0, x.x()), RealJet::coordinate(1, x.y()),
                                  RealJet::coordinate(2, x.z()));
}

cplx radial_solution_g(int nu, int n, double r, const WaveNumber& k) {
  if (n < 3) throw std::invalid_argument("radial_solution_g: dimension n must be >= 3");
  if (nu < 0) throw std::invalid_argument("radial_solution_g: degree must be nonnegative");
  if (r < 0.0) throw std::domain_error("radial_solution_g: r must be nonnegative");
  const cplx z = k.value() * r;
  if (n == 3) return spherical_bessel_j(nu, z);

  const double shift = 0.5 * (n - 2);
  const cplx half = 0.5 * z;
  cplx term = std::pow(2.0, -shift) / std::tgamma(nu + shift + 1.0);
  for (int i = 0; i < nu; ++i) term *= half;
  cplx sum = term;
  const cplx w = -half * half;
  for (int m = 1; m < 400; ++m) {
    term *= w / (double(m) * (m + nu + shift));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

long long harmonic_dimension(int nu, int n) {
  if (n < 3) throw std::invalid_argument("harmonic_dimension: dimension n must be >= 3");
  if (nu < 0) throw std::invalid_argument("harmonic_dimension: degree must be nonnegative");
  // C(nu+n-3, nu)
  long long binom = 1;
  for (int i = 1; i <= n - 3; ++i) binom = binom * (nu + i) / i;
  return (2LL * nu + n - 2) * binom / (n - 2);
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= n; ++l) {
        const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      const double p = (n == 1) ? x : p1;
      const double pm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = mid - half * x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = mid + half * x;
    rule.weights[static_cast<std::size_t>(i)] = half * w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = half * w;
  }
  return rule;
}

QuadratureRule graded_gauss_legendre(double a, double b, double toward, double finest, int order) {
  if (!(b > a)) throw std::invalid_argument("graded_gauss_legendre: empty interval");
  if (toward != a && toward != b) throw std::invalid_argument("graded_gauss_legendre: grading end must be a or b");
  const double length = b - a;
  std::vector<double> dist{0.0};
  double step = std::max(finest, 1e-300);
  while (dist.back() + step < length) {
    dist.push_back(dist.back() + step);
    if (dist.size() > 2) step *= 2.0;
  }
  dist.push_back(length);

  QuadratureRule rule;
  for (std::size_t p = 0; p + 1 < dist.size(); ++p) {
    const double lo = (toward == b) ? b - dist[p + 1] : a + dist[p];
    const double hi = (toward == b) ? b - dist[p] : a + dist[p + 1];
    const auto panel = gauss_legendre(order, lo, hi);
    rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    rule.weights.insert(rule.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  return rule;
}

SphereRule sphere_rule(int n) {
  if (n < 1) throw std::invalid_argument("sphere_rule: resolution must be positive");
  const auto gl = gauss_legendre(n);
  const int nphi = 2 * n;
  SphereRule rule;
  rule.points.reserve(static_cast<std::size_t>(n * nphi));
  rule.weights.reserve(static_cast<std::size_t>(n * nphi));
  for (int i = 0; i < n; ++i) {
    const double u = gl.nodes[static_cast<std::size_t>(i)];
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2.0 * kPi * j / nphi;
      rule.points.emplace_back(s * std::cos(phi), s * std::sin(phi), u);
      rule.weights.push_back(gl.weights[static_cast<std::size_t>(i)] * 2.0 * kPi / nphi);
    }
  }
  return rule;
}

}  // namespace carleman
