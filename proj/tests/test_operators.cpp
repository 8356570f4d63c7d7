#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "carleman/operators.hpp"
#include "test_support.hpp"

using namespace carleman;

namespace {

Vec3 random_xi(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  return u(rng) * test_support::random_unit(rng);
}

}  // namespace

TEST_CASE("wave number from material parameters") {
  CHECK(std::abs(wavenumber_from_material({1, 1, 0, 2}).value() - cplx(2.0)) < 1e-15);
  CHECK(std::abs(wavenumber_from_material({1, 1, 0, 1}).value() - cplx(1.0)) < 1e-15);
  const cplx k = wavenumber_from_material({2, 1, 1, 1}).value();
  CHECK(std::abs(k - cplx(1.4553466902253548, 0.34356074972251246)) < 1e-14);
  CHECK(k.imag() > 0.0);
  CHECK(std::abs(k * k - cplx(2.0, 1.0)) < 1e-14);
  CHECK_THROWS_AS(wavenumber_from_material({1, 1, 0, 0}), std::domain_error);
  CHECK_THROWS_AS(wavenumber_from_material({-1, 1, 0, 1}), std::invalid_argument);
}

TEST_CASE("Maxwell symbol structure") {
  const WaveNumber k(1.3, 0.2);
  const cplx ik = I * k.value();
  const auto m0 = maxwell_symbol(1, Vec3::Zero(), k).entries;
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(6, 6);
  expect.topLeftCorner(3, 3) = ik * Eigen::Matrix3cd::Identity();
  expect.bottomRightCorner(3, 3) = -ik * Eigen::Matrix3cd::Identity();
  CHECK((m0 - expect).cwiseAbs().maxCoeff() == 0.0);

  // xi = (1,0,0): curl symbol i xi x. The (E_y, H_z) entry of the upper-right
  // block is -i and the (H_z, E_y) entry of the lower-left block is +i.
  const auto m1 = maxwell_symbol(1, Vec3(1, 0, 0), WaveNumber(1.0)).entries;
  CHECK(std::abs(m1(1, 5) - cplx(0.0, -1.0)) < 1e-15);
  CHECK(std::abs(m1(5, 1) - cplx(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(m1(2, 4) - cplx(0.0, 1.0)) < 1e-15);

  const Vec3 xi(0.3, -1.2, 2.0);
  const auto s0 = maxwell_symbol(0, xi, k).entries;
  CHECK(s0.rows() == 4);
  CHECK(s0.cols() == 4);
  for (int a = 0; a < 3; ++a) CHECK(std::abs(s0(1 + a, 0) - I * xi(a)) < 1e-15);
  CHECK(maxwell_symbol(2, xi, k).entries.rows() == 4);
  CHECK_THROWS_AS(maxwell_symbol(1, xi, WaveNumber(0.0)), std::domain_error);
  CHECK_THROWS_AS(maxwell_symbol(3, xi, k), std::invalid_argument);
}

TEST_CASE("Maxwell symbol is block anti-diagonal plus the ik diagonal") {
  std::mt19937_64 rng(3);
  const WaveNumber k(0.7, 0.1);
  for (int step = 0; step <= 2; ++step) {
    const Vec3 xi = random_xi(rng);
    const auto m = maxwell_symbol(step, xi, k).entries;
    const int r0 = bundle_rank(step);
    const auto ur = m.topRightCorner(r0, m.cols() - r0);
    const auto ll = m.bottomLeftCorner(m.rows() - r0, r0);
    CHECK((ur - ll.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("parametrix symbol examples") {
  const WaveNumber k(1.0);
  const auto c0 = parametrix_symbol(1, Vec3::Zero(), k).entries;
  CHECK((c0 - maxwell_symbol(1, Vec3::Zero(), k).entries).cwiseAbs().maxCoeff() == 0.0);

  const Vec3 xi(0, 0, 1);
  const auto c = parametrix_symbol(1, xi, k).entries;
  Eigen::Matrix3cd expect = I * Eigen::Matrix3cd::Identity();
  expect -= I * (xi * xi.transpose()).cast<cplx>();
  CHECK((c.topLeftCorner(3, 3) - expect).cwiseAbs().maxCoeff() < 1e-15);

  std::mt19937_64 rng(4);
  for (int step = 0; step <= 2; ++step) {
    for (int t = 0; t < 10; ++t) {
      const Vec3 x = random_xi(rng);
      const WaveNumber kk(1.0 + t * 0.3, 0.1 * t);
      const auto a = parametrix_symbol(step, x, kk).entries;
      const auto b = parametrix_symbol_laplacian_form(step, x, kk).entries;
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + a.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("factorization identity at zero frequency is exact") {
  for (int step = 0; step <= 2; ++step) CHECK(factorization_residual(step, Vec3::Zero(), WaveNumber(2.0, 0.5)) == 0.0);
}

TEST_CASE("factorization identity over random frequencies") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> kr(0.2, 5.0), ki(0.0, 2.0);
  for (int step = 0; step <= 2; ++step) {
    double worst_fixed = 0.0, worst_random = 0.0;
    for (int t = 0; t < 100; ++t) {
      worst_fixed = std::max(worst_fixed, factorization_residual(step, random_xi(rng), WaveNumber(2.0, 0.5)));
      worst_random = std::max(worst_random, factorization_residual(step, random_xi(rng), WaveNumber(kr(rng), ki(rng))));
    }
    CHECK(worst_fixed <= 1e-12);
    CHECK(worst_random <= 1e-12);
  }
}

TEST_CASE("complex property of the symbols") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const Vec3 xi = random_xi(rng);
    CHECK(complex_property_residual(0, xi) <= 1e-13);
    CHECK(complex_property_residual(1, xi) <= 1e-13);
  }
}

TEST_CASE("Laplacian symbols are scalar") {
  const Vec3 xi(1.5, -0.2, 0.7);
  for (int i = 0; i <= 3; ++i) {
    const auto lap = laplacian_symbol(i, xi);
    const int r = bundle_rank(i);
    CHECK((lap - xi.squaredNorm() * Eigen::MatrixXcd::Identity(r, r)).cwiseAbs().maxCoeff() < 1e-14);
  }
}
