#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "carleman/harness.hpp"
#include "carleman/potentials.hpp"
#include "test_support.hpp"

using namespace carleman;

namespace {

double rel_field(const FieldSample& a, const FieldSample& b) {
  return ((a.E - b.E).norm() + (a.H - b.H).norm()) / (b.E.norm() + b.H.norm());
}

SyntheticSolution test_wave(const WaveNumber& k) {
  const Vec3 d = Vec3(1, 2, -2) / 3.0;
  const CVec3 p = d.cross(Vec3(1, 0, 0)).normalized().cast<cplx>() * cplx(0.8, -0.6);
  return SyntheticSolution::plane_wave(k, d, p);
}

}  // namespace

TEST_CASE("reproduction on the unit sphere") {
  const WaveNumber k(1.0);
  const auto s = SyntheticSolution::plane_wave(k, Vec3(0, 0, 1), CVec3(1, 0, 0));
  const auto mesh = mesh_sphere(1.0, 64);
  const auto tr = make_cauchy_data(s, mesh, 0.0, 0);
  const auto inside = stratton_chu_eval(mesh, tr, Vec3::Zero(), k);
  CHECK(rel_field(inside, eval_plane_wave(s, Vec3::Zero())) <= 1e-4);
  CHECK_FALSE(inside.near_surface);
  const auto outside = stratton_chu_eval(mesh, tr, Vec3(3, 0, 0), k);
  CHECK(outside.E.norm() + outside.H.norm() <= 1e-4 * std::sqrt(2.0));
}

TEST_CASE("reproduction for general waves, dipoles and complex k") {
  for (const cplx kv : {cplx(1.0), cplx(2.0, 0.5)}) {
    const WaveNumber k(kv);
    const auto domain = make_cap_domain(2.0, kPi, 1.0);
    const auto mesh = mesh_boundary(domain, 48);
    for (const auto& s : {test_wave(k), SyntheticSolution::dipole(k, Vec3(0.1, 0.2, -0.3), CVec3(1, cplx(0, 1), 0.5))}) {
      const auto tr = make_cauchy_data(s, mesh, 0.0, 0);
      for (const Vec3& x : {Vec3(1.5, 0, 0), Vec3(0, -1.2, 0.4), Vec3(-0.8, 0.8, -0.7)})
        CHECK(rel_field(stratton_chu_eval(mesh, tr, x, k), eval_solution(s, x)) <= 1e-7);
      const auto out = stratton_chu_eval(mesh, tr, Vec3(0, 0, 3.0), k);
      const auto ref = eval_solution(s, Vec3(0, 0, 2.0));
      CHECK(out.E.norm() + out.H.norm() <= 1e-7 * (ref.E.norm() + ref.H.norm()));
    }
  }
}

TEST_CASE("reproduction error falls when the resolution doubles") {
  const WaveNumber k(1.0);
  const auto s = test_wave(k);
  const Vec3 x(0.3, -0.5, 0.2);
  const auto ref = eval_plane_wave(s, x);
  double prev = -1.0;
  for (int res : {8, 16, 32}) {
    const auto mesh = mesh_sphere(1.0, res);
    const double err = rel_field(stratton_chu_eval(mesh, make_cauchy_data(s, mesh, 0.0, 0), x, k), ref);
    if (prev > 0.0) CHECK(prev / err >= 4.0);
    prev = err;
  }
}

TEST_CASE("zero traces and linearity") {
  const WaveNumber k(1.3, 0.2);
  const auto mesh = mesh_sphere(1.0, 8);
  const auto z = TraceData::zeros(mesh.size());
  const auto f = stratton_chu_eval(mesh, z, Vec3(0.1, 0.2, 0.3), k);
  CHECK(f.E.norm() == 0.0);
  CHECK(f.H.norm() == 0.0);
  const auto g = cauchy_integral_G(mesh, z, Vec3(0.1, 0.2, 0.3), k);
  CHECK(g.E.norm() + g.H.norm() == 0.0);

  const auto a = make_cauchy_data(test_wave(k), mesh, 0.0, 0);
  const auto b = make_cauchy_data(SyntheticSolution::dipole(k, Vec3(0, 0, 2), CVec3(1, 0, 0)), mesh, 0.0, 0);
  const cplx alpha(0.7, -1.1), beta(-2.0, 0.3);
  TraceData c = a;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    c.t_E[i] = alpha * a.t_E[i] + beta * b.t_E[i];
    c.n_H[i] = alpha * a.n_H[i] + beta * b.n_H[i];
  }
  const Vec3 x(0.2, -0.3, 0.1);
  const auto fa = stratton_chu_eval(mesh, a, x, k), fb = stratton_chu_eval(mesh, b, x, k);
  const auto fc = stratton_chu_eval(mesh, c, x, k);
  const CVec6 lin = alpha * fa.stacked() + beta * fb.stacked();
  CHECK((fc.stacked() - lin).norm() <= 1e-13 * lin.norm());
}

TEST_CASE("G over a part of the boundary is not the field") {
  const WaveNumber k(1.0);
  const auto domain = make_cap_domain(2.0, kPi, 1.0);
  const auto mesh = mesh_boundary(domain, 24);
  const auto s = test_wave(k);
  const auto tr = make_cauchy_data(s, mesh, 0.0, 0);
  const auto sm = mesh.restricted(PatchTag::S);
  const auto ts = restrict_traces(tr, mesh, PatchTag::S);
  const Vec3 x(1.5, 0, 0);
  CHECK(rel_field(cauchy_integral_G(sm, ts, x, k), eval_plane_wave(s, x)) > 1e-2);
}

TEST_CASE("G solves Maxwell off S") {
  const WaveNumber k(1.4, 0.3);
  const auto domain = make_cap_domain(2.0, kPi / 2, 1.0);
  const auto full = mesh_boundary(domain, 12);
  const auto sm = full.restricted(PatchTag::S);
  const auto s = SyntheticSolution::dipole(k, Vec3(0, 0, -0.5), CVec3(0.2, 1.0, cplx(0, 0.4)));
  const auto data = restrict_traces(make_cauchy_data(s, full, 0.0, 0), full, PatchTag::S);
  std::mt19937_64 rng(9);
  int checked = 0;
  while (checked < 20) {
    const Vec3 x = test_support::random_in_shell(rng, 0.1, 3.0);
    if (sm.is_near(x)) continue;
    ++checked;
    const auto f = cauchy_integral_G_with_curls(sm, data, x, k);
    CHECK(maxwell_residual(f, k) <= 1e-8);
    const auto plain = cauchy_integral_G(sm, data, x, k);
    CHECK((plain.E - f.E).norm() <= 1e-14 * (f.E.norm() + f.H.norm()));
    // Independent check of the analytic curls.
    const double h = 1e-3 * std::max(0.1, sm.distance_to(x));
    const CVec3 cE = test_support::fd_curl([&](const Vec3& y) -> CVec3 { return cauchy_integral_G(sm, data, y, k).E; }, x, h);
    const CVec3 cH = test_support::fd_curl([&](const Vec3& y) -> CVec3 { return cauchy_integral_G(sm, data, y, k).H; }, x, h);
    const double scale = f.curl_E.norm() + f.curl_H.norm();
    CHECK(((cE - f.curl_E).norm() + (cH - f.curl_H).norm()) / scale <= 1e-6);
  }
}

TEST_CASE("kernel columns satisfy the Helmholtz equation") {
  const WaveNumber k(1.1, 0.2);
  const Vec3 y(0.3, 0.1, -0.4);
  const Vec3 x(1.2, -0.7, 0.5);
  const double h = 1e-3;
  KernelMatrix lap = KernelMatrix::Zero();
  const KernelMatrix k0 = kernel_block(x, y, k);
  for (int a = 0; a < 3; ++a) {
    Vec3 xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    lap += (kernel_block(xp, y, k) - 2.0 * k0 + kernel_block(xm, y, k)) / (h * h);
  }
  const cplx k2 = k.value() * k.value();
  CHECK((lap + k2 * k0).cwiseAbs().maxCoeff() <= 1e-5 * k0.cwiseAbs().maxCoeff());
  CHECK_THROWS_AS(kernel_block(y, y, k), std::domain_error);
  CHECK_THROWS_AS(kernel_block(x, y, WaveNumber(0.0)), std::domain_error);
}

TEST_CASE("near-surface targets are flagged, not rejected") {
  const auto mesh = mesh_sphere(1.0, 8);
  const auto s = test_wave(WaveNumber(1.0));
  const auto tr = make_cauchy_data(s, mesh, 0.0, 0);
  const auto f = stratton_chu_eval(mesh, tr, Vec3(0, 0, 0.99), WaveNumber(1.0));
  CHECK(f.near_surface);
  CHECK(std::isfinite(f.E.norm()));
}
