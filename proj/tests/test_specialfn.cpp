#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "carleman/specialfn.hpp"
#include "test_support.hpp"

using namespace carleman;
using test_support::rel;

using test_support::bessel_series_oracle;

TEST_CASE("fundamental solution closed-form values") {
  const auto e0 = helmholtz_value(Vec3(1, 0, 0), WaveNumber(0.0));
  CHECK(std::abs(e0 - cplx(-1.0 / (4.0 * kPi))) < 1e-15);
  const auto e1 = helmholtz_value(Vec3(1, 0, 0), WaveNumber(1.0));
  CHECK(std::abs(e1 - cplx(-std::cos(1.0), -std::sin(1.0)) / (4.0 * kPi)) < 1e-15);
  CHECK(std::abs(e1.real() - (-0.042996)) < 1e-6);
  CHECK(std::abs(e1.imag() - (-0.0669625)) < 1e-6);
}

TEST_CASE("fundamental solution rejects the origin and lower half-plane k") {
  CHECK_THROWS_AS(helmholtz_fundamental(Vec3::Zero(), WaveNumber(1.0)), std::domain_error);
  CHECK_THROWS_AS(WaveNumber(1.0, -0.1), std::domain_error);
}

TEST_CASE("fundamental solution derivatives match finite differences") {
  const WaveNumber k(2.0, 0.5);
  std::mt19937_64 rng(11);
  std::vector<Vec3> points{Vec3(0.3, -0.1, 0.2)};
  for (int i = 0; i < 20; ++i) points.push_back(test_support::random_in_shell(rng, 0.2, 3.0));
  const double h = 1e-5;
  for (const auto& x : points) {
    const auto d = helmholtz_fundamental(x, k);
    for (int a = 0; a < 3; ++a) {
      const cplx fd = test_support::central_diff([&](const Vec3& p) { return helmholtz_value(p, k); }, x, a, h);
      CHECK(rel(d.gradient(a), fd) < 1e-6);
      const CVec3 fdg = test_support::central_diff(
          [&](const Vec3& p) -> CVec3 { return helmholtz_fundamental(p, k).gradient; }, x, a, h);
      CHECK((d.hessian.col(a) - fdg).norm() / d.hessian.norm() < 1e-6);
    }
  }
}

TEST_CASE("fundamental solution satisfies the Helmholtz equation") {
  std::mt19937_64 rng(12);
  for (const cplx kv : {cplx(1.0), cplx(2.0, 1.0), cplx(0.0, 0.5)}) {
    const WaveNumber k(kv);
    for (int i = 0; i < 50; ++i) {
      const double r = std::exp(std::uniform_real_distribution<double>(std::log(0.1), std::log(10.0))(rng));
      const Vec3 x = r * test_support::random_unit(rng);
      const auto d = helmholtz_fundamental(x, k);
      const cplx lap = d.hessian.trace();
      const cplx res = lap + kv * kv * d.value;
      const double scale = std::max(std::abs(lap), std::abs(kv * kv * d.value));
      CHECK(std::abs(res) / scale < 1e-8);
    }
  }
}

TEST_CASE("spherical Bessel closed forms and series") {
  CHECK(std::abs(spherical_bessel_j(0, 0.0) - 1.0) < 1e-16);
  CHECK(std::abs(spherical_bessel_j(1, 1.0) - (std::sin(1.0) - std::cos(1.0))) < 1e-15);
  CHECK(std::abs(spherical_bessel_j(1, 1.0).real() - 0.301169) < 1e-6);
  const auto oracle = bessel_series_oracle(5, 0.1L);
  CHECK(rel(spherical_bessel_j(5, 0.1), cplx(static_cast<double>(oracle.real()), 0.0)) < 1e-12);
  for (int nu = 0; nu <= 12; ++nu) {
    for (const cplx z : {cplx(0.7, 0.2), cplx(1.3, -0.4), cplx(2.5, 0.0)}) {
      const auto o = bessel_series_oracle(nu, std::complex<long double>(z.real(), z.imag()));
      CHECK(rel(spherical_bessel_j(nu, z), cplx(static_cast<double>(o.real()), static_cast<double>(o.imag()))) <
            1e-12);
    }
  }
}

TEST_CASE("spherical Bessel agrees with the standard library for real arguments") {
  for (int nu = 0; nu <= 15; ++nu) {
    for (const double x : {0.05, 0.5, 1.0, 3.3, 7.5, 12.0, 19.0}) {
      const double ref = std::sph_bessel(static_cast<unsigned>(nu), x);
      const cplx v = spherical_bessel_j(nu, x);
      CHECK(std::abs(v.imag()) < 1e-300);
      CHECK(std::abs(v.real() - ref) <= 1e-12 * std::max(std::abs(ref), 1e-300) + 1e-16 * std::abs(ref) + 1e-300);
    }
  }
}

TEST_CASE("spherical Bessel and Hankel against high-precision values") {
  struct Case {
    int nu;
    cplx z;
    cplx value;
  };
  const Case jcases[] = {
      {3, {15.0, 2.0}, {-0.23519192092980758, -0.039474234631540793}},
      {10, {5.0, 5.0}, {0.021023154918039643, 0.011181077699798021}},
      {7, {0.3, 0.1}, {-9.7827609506245677e-11, 1.2105088687342491e-10}},
      {2, {19.5, 0.0}, {-0.037086949083542907, 0.0}},
      {12, {2.0, -1.0}, {1.3109860271846781e-9, 1.3331297815503779e-9}},
      {20, {3.0, 0.5}, {-3.1330133248496469e-16, -3.979384320955062e-17}},
  };
  for (const auto& c : jcases) CHECK(rel(spherical_bessel_j(c.nu, c.z), c.value) < 1e-12);
  const Case hcases[] = {
      {4, {2.7, 0.3}, {-0.46369178444852454, -1.1579709587184825}},
      {1, {0.5, 0.0}, {0.16253703063606657, -4.4691813247698969}},
      {8, {10.0, 1.0}, {0.061880590205201205, -0.037477117719691147}},
      {3, {1.5, 0.0}, {0.028324641582471801, -3.7892735647020435}},
  };
  for (const auto& c : hcases) CHECK(rel(spherical_hankel_h1(c.nu, c.z), c.value) < 1e-12);
}

TEST_CASE("spherical Hankel closed forms") {
  CHECK(std::abs(spherical_hankel_h1(0, 1.0) - cplx(std::sin(1.0), -std::cos(1.0))) < 1e-15);
  CHECK(std::abs(spherical_hankel_h1(0, kPi) - cplx(0.0, 1.0 / kPi)) < 1e-15);
  CHECK_THROWS_AS(spherical_hankel_h1(0, 0.0), std::domain_error);
}

TEST_CASE("Bessel and Hankel three-term recurrences") {
  const int L = 20;
  for (const double mod : {0.1, 0.5, 1.0, 2.7, 5.0, 10.0, 20.0}) {
    for (const double arg : {0.0, 0.3, 0.8, 1.2}) {
      const cplx z = std::polar(mod, arg);
      const auto j = spherical_bessel_j_all(L, z);
      const auto h = spherical_hankel_h1_all(L, z);
      for (int nu = 1; nu < L; ++nu) {
        const cplx mid = (2.0 * nu + 1.0) / z;
        const double sj = std::max({std::abs(j[nu - 1]), std::abs(j[nu + 1]), std::abs(mid * j[nu])});
        CHECK(std::abs(j[nu - 1] + j[nu + 1] - mid * j[nu]) <= 1e-10 * sj);
        const double sh = std::max({std::abs(h[nu - 1]), std::abs(h[nu + 1]), std::abs(mid * h[nu])});
        CHECK(std::abs(h[nu - 1] + h[nu + 1] - mid * h[nu]) <= 1e-10 * sh);
      }
    }
  }
}

TEST_CASE("scaled Bessel values are j_nu(z) / z^nu") {
  const cplx z(1.7, 0.4);
  const auto s = spherical_bessel_j_scaled_all(8, z);
  const auto j = spherical_bessel_j_all(8, z);
  for (int nu = 0; nu <= 8; ++nu) CHECK(rel(s[nu] * std::pow(z, nu), j[nu]) < 1e-13);
  const auto s0 = spherical_bessel_j_scaled_all(4, 0.0);
  CHECK(std::abs(s0[0] - 1.0) < 1e-16);
  CHECK(std::abs(s0[2] - 1.0 / 15.0) < 1e-16);
}

TEST_CASE("spherical harmonics: low degrees") {
  const Vec3 w = Vec3(0.3, -0.5, 0.7).normalized();
  CHECK(std::abs(spherical_harmonic({0, 1, 3}, w) - 1.0 / std::sqrt(4.0 * kPi)) < 1e-15);
  CHECK(std::abs(spherical_harmonic({0, 1, 3}, w) - 0.282095) < 1e-6);
  const double c = std::sqrt(3.0 / (4.0 * kPi));
  // The three degree-1 values are c times a permutation of the coordinates.
  Vec3 vals(spherical_harmonic({1, 1, 3}, w), spherical_harmonic({1, 2, 3}, w), spherical_harmonic({1, 3, 3}, w));
  Vec3 sorted_vals = vals / c, sorted_w = w;
  std::sort(sorted_vals.data(), sorted_vals.data() + 3);
  std::sort(sorted_w.data(), sorted_w.data() + 3);
  CHECK((sorted_vals - sorted_w).norm() < 1e-14);
}

TEST_CASE("spherical harmonics agree with the standard library up to phase") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec3 w = test_support::random_unit(rng);
    const double theta = std::acos(w.z()), phi = std::atan2(w.y(), w.x());
    const auto all = spherical_harmonics_all(8, w);
    for (int l = 0; l <= 8; ++l) {
      CHECK(std::abs(all[flat_index(l, l + 1)] - std::sph_legendre(l, 0, theta)) < 1e-13);
      for (int m = 1; m <= l; ++m) {
        const double ref = std::sqrt(2.0) * std::abs(std::sph_legendre(l, m, theta));
        CHECK(std::abs(std::abs(all[flat_index(l, l + m + 1)]) - ref * std::abs(std::cos(m * phi))) < 1e-13);
        CHECK(std::abs(std::abs(all[flat_index(l, l - m + 1)]) - ref * std::abs(std::sin(m * phi))) < 1e-13);
      }
    }
  }
}

TEST_CASE("spherical harmonics are orthonormal under the sphere rule") {
  const int L = 6;
  const auto rule = sphere_rule(16);
  const int n = table_size(L);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const auto y = spherical_harmonics_all(L, rule.points[q]);
    const Eigen::Map<const Eigen::VectorXd> v(y.data(), n);
    gram += rule.weights[q] * v * v.transpose();
  }
  CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("spherical harmonic input validation") {
  CHECK_THROWS_AS(spherical_harmonic({1, 1, 3}, Vec3(1.0 + 1e-9, 0, 0)), std::domain_error);
  CHECK_THROWS(spherical_harmonic({2, 6, 3}, Vec3(1, 0, 0)));
  CHECK_NOTHROW(spherical_harmonic({2, 5, 3}, Vec3(1, 0, 0)));
}

TEST_CASE("solid harmonic jets match finite differences") {
  const Vec3 x(0.4, -0.3, 0.6);
  const auto jets = solid_harmonic_jets(5, x);
  const double h = 1e-5;
  for (int idx = 0; idx < table_size(5); ++idx) {
    for (int a = 0; a < 3; ++a) {
      const double fd = test_support::central_diff(
          [&](const Vec3& p) { return solid_harmonic_jets(5, p)[static_cast<std::size_t>(idx)].value; }, x, a, h);
      CHECK(std::abs(jets[idx].grad[a] - fd) < 1e-8);
      for (int b = 0; b < 3; ++b) {
        const double fd2 = test_support::central_diff(
            [&](const Vec3& p) { return solid_harmonic_jets(5, p)[static_cast<std::size_t>(idx)].grad[b]; }, x, a, h);
        CHECK(std::abs(jets[idx].hess[a][b] - fd2) < 1e-7);
      }
    }
    CHECK(std::abs(jets[idx].laplacian()) < 1e-12);
  }
}

TEST_CASE("radial solutions") {
  CHECK(std::abs(radial_solution_g(0, 3, 0.0, WaveNumber(1.0)) - 1.0) < 1e-16);
  CHECK(rel(radial_solution_g(3, 3, 0.8, WaveNumber(1.5, 0.2)), spherical_bessel_j(3, cplx(1.5, 0.2) * 0.8)) < 1e-14);
  CHECK_THROWS_AS(radial_solution_g(1, 3, -0.1, WaveNumber(1.0)), std::domain_error);
  CHECK(rel(radial_solution_g(2, 5, 0.5, WaveNumber(1.0)), cplx(0.0018734895089945262)) < 1e-12);

  // Small k: g is proportional to r^nu.
  for (int nu = 0; nu <= 5; ++nu) {
    const WaveNumber k(1e-6);
    const cplx ratio = radial_solution_g(nu, 3, 1.0, k) / radial_solution_g(nu, 3, 0.5, k);
    CHECK(std::abs(ratio - std::pow(2.0, nu)) < 1e-9 * std::pow(2.0, nu));
  }
}

TEST_CASE("radial solutions satisfy the separated Helmholtz equation") {
  // r^2 g'' + (n-1) r g' + (k^2 r^2 - nu(nu+n-2)) g, normalised by its largest term.
  auto residual = [](int nu, int n, double r, const WaveNumber& k, double h, bool fourth_order) {
    auto g = [&](double t) { return radial_solution_g(nu, n, t, k); };
    const cplx g0 = g(r), gp = g(r + h), gm = g(r - h);
    cplx d1 = (gp - gm) / (2.0 * h), d2 = (gp - 2.0 * g0 + gm) / (h * h);
    if (fourth_order) {
      const cplx gpp = g(r + 2.0 * h), gmm = g(r - 2.0 * h);
      d1 = (8.0 * (gp - gm) - (gpp - gmm)) / (12.0 * h);
      d2 = (16.0 * (gp + gm) - 30.0 * g0 - (gpp + gmm)) / (12.0 * h * h);
    }
    const cplx k2 = k.value() * k.value();
    const cplx t1 = r * r * d2, t2 = (n - 1.0) * r * d1, t3 = k2 * r * r * g0, t4 = -nu * (nu + n - 2.0) * g0;
    const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4)});
    return std::abs(t1 + t2 + t3 + t4) / scale;
  };
  CHECK(residual(2, 5, 0.5, WaveNumber(1.0), 1e-4, false) <= 1e-6);
  for (const int n : {3, 4, 5}) {
    for (int nu = 0; nu <= 8; ++nu) {
      for (int i = 0; i <= 20; ++i) {
        const double r = 0.01 + i * (2.0 - 0.01) / 20.0;
        // g behaves like r^nu near 0, so the step shrinks with the degree.
        const double h = 0.01 * r / (nu + 1.0);
        CHECK(residual(nu, n, r, WaveNumber(1.0), h, true) <= 1e-6);
        CHECK(residual(nu, n, r, WaveNumber(1.5, 0.5), h, true) <= 1e-6);
      }
    }
  }
}

TEST_CASE("harmonic dimension") {
  CHECK(harmonic_dimension(4, 3) == 9);
  CHECK(harmonic_dimension(2, 4) == 9);
  for (int n = 3; n <= 8; ++n) CHECK(harmonic_dimension(0, n) == 1);
  for (int nu = 0; nu <= 20; ++nu) CHECK(harmonic_dimension(nu, 3) == 2 * nu + 1);
  CHECK(harmonic_dimension(3, 4) == 16);
}

TEST_CASE("Gauss-Legendre rules") {
  const auto q = gauss_legendre(10, 0.0, 2.0);
  for (int p = 0; p <= 19; ++p) {
    double s = 0.0;
    for (int i = 0; i < 10; ++i) s += q.weights[i] * std::pow(q.nodes[i], p);
    CHECK(std::abs(s - std::pow(2.0, p + 1) / (p + 1)) < 1e-12 * std::pow(2.0, p + 1));
  }
  const auto g = graded_gauss_legendre(0.0, 1.0, 1.0, 1e-4, 12);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * 1.0 / std::sqrt(1.0001 - g.nodes[i]);
  CHECK(std::abs(s - 2.0 * (std::sqrt(1.0001) - std::sqrt(0.0001))) < 1e-10);
  const auto rule = sphere_rule(8);
  double area = 0.0;
  for (double w : rule.weights) area += w;
  CHECK(std::abs(area - 4.0 * kPi) < 1e-13);
}
