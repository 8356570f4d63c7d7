#include "carleman/harness.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace carleman {

void SyntheticSolution::validate() const {
  k.require_nonzero("synthetic solution");
  if (kind == Kind::PlaneWave) {
    if (std::abs(direction.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("plane wave: direction must be a unit vector");
    if (std::abs((direction.cast<cplx>().transpose() * polarization)(0)) > 1e-12)
      throw std::invalid_argument("plane wave: polarization must be orthogonal to the direction");
  }
}

SyntheticSolution SyntheticSolution::plane_wave(const WaveNumber& k, const Vec3& d, const CVec3& p) {
  SyntheticSolution s;
  s.kind = Kind::PlaneWave;
  s.k = k;
  s.direction = d;
  s.polarization = p;
  s.validate();
  return s;
}

SyntheticSolution SyntheticSolution::dipole(const WaveNumber& k, const Vec3& x0, const CVec3& p) {
  SyntheticSolution s;
  s.kind = Kind::Dipole;
  s.k = k;
  s.source = x0;
  s.moment = p;
  s.validate();
  return s;
}

SyntheticSolution SyntheticSolution::zero(const WaveNumber& k) {
  SyntheticSolution s;
  s.kind = Kind::Zero;
  s.k = k;
  s.validate();
  return s;
}

FieldSample eval_plane_wave(const SyntheticSolution& s, const Vec3& x) {
  if (s.kind != SyntheticSolution::Kind::PlaneWave) throw std::invalid_argument("eval_plane_wave: not a plane wave");
  const cplx phase = std::exp(I * s.k.value() * s.direction.dot(x));
  FieldSample f;
  f.at = x;
  f.E = s.polarization * phase;
  f.H = cross(s.direction.cast<cplx>(), s.polarization) * phase;
  return f;
}

namespace {

// Dipole pieces: D = Hess e + k^2 e I, g = grad e at x - x0.
struct DipoleParts {
  CVec3 g;
  CMat3 D;
};

DipoleParts dipole_parts(const SyntheticSolution& s, const Vec3& x) {
  const Vec3 r = x - s.source;
  if (r.norm() == 0.0) throw std::domain_error("eval_dipole: evaluation at the source point");
  const auto e = helmholtz_fundamental(r, s.k);
  const cplx k2 = s.k.value() * s.k.value();
  return {e.gradient, e.hessian + k2 * e.value * CMat3::Identity()};
}

}  // namespace

FieldSample eval_dipole(const SyntheticSolution& s, const Vec3& x) {
  if (s.kind != SyntheticSolution::Kind::Dipole) throw std::invalid_argument("eval_dipole: not a dipole");
  const auto parts = dipole_parts(s, x);
  const cplx ik = I * s.k.value();
  FieldSample f;
  f.at = x;
  f.H = cross(parts.g, s.moment);
  // curl(grad e x p) = (Hess e) p - (Lap e) p = (Hess e + k^2 e) p off the source.
  f.E = -(parts.D * s.moment) / ik;
  return f;
}

FieldSample eval_solution(const SyntheticSolution& s, const Vec3& x) {
  switch (s.kind) {
    case SyntheticSolution::Kind::PlaneWave:
      return eval_plane_wave(s, x);
    case SyntheticSolution::Kind::Dipole:
      return eval_dipole(s, x);
    case SyntheticSolution::Kind::Zero:
      break;
  }
  FieldSample f;
  f.at = x;
  return f;
}

FieldWithCurls eval_with_curls(const SyntheticSolution& s, const Vec3& x) {
  const FieldSample f = eval_solution(s, x);
  const cplx ik = I * s.k.value();
  FieldWithCurls out;
  out.E = f.E;
  out.H = f.H;
  if (s.kind == SyntheticSolution::Kind::PlaneWave) {
    // curl(v exp(ik d.x)) = ik d x v exp(ik d.x).
    const CVec3 d = s.direction.cast<cplx>();
    out.curl_E = ik * cross(d, f.E);
    out.curl_H = ik * cross(d, f.H);
  } else if (s.kind == SyntheticSolution::Kind::Dipole) {
    const auto parts = dipole_parts(s, x);
    out.curl_H = parts.D * s.moment;
    // curl E = -(1/ik) curl curl H = -(1/ik)(grad div H - Lap H) = -(1/ik) k^2 H.
    const cplx k2 = s.k.value() * s.k.value();
    out.curl_E = -(k2 / ik) * f.H;
  }
  return out;
}

TraceData make_cauchy_data(const SyntheticSolution& s, const SurfaceMesh& mesh, double noise_rel, std::uint64_t seed) {
  if (!(noise_rel >= 0.0) || !std::isfinite(noise_rel))
    throw std::invalid_argument("make_cauchy_data: noise level must be finite and nonnegative");
  TraceData t = take_traces([&](const Vec3& x) { return eval_solution(s, x); }, mesh);
  if (noise_rel == 0.0 || mesh.empty()) return t;

  auto mean_square = [](const std::vector<CVec3>& v) {
    double acc = 0.0;
    for (const auto& c : v) acc += c.squaredNorm();
    return acc / static_cast<double>(v.size());
  };

  // A tangent plane has two real directions and each complex coordinate has
  // two real parts, so four real normals share the target variance.
  auto perturb = [&](std::vector<CVec3>& values, std::uint64_t stream) {
    const double sigma = noise_rel * std::sqrt(mean_square(values) / 4.0);
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const Vec3& nu = mesh.normals[i];
      const Vec3 helper = std::abs(nu.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
      const Vec3 t1 = nu.cross(helper).normalized();
      const Vec3 t2 = nu.cross(t1);
      const double a = normal(rng), b = normal(rng), c = normal(rng), d = normal(rng);
      values[i] += sigma * (cplx(a, b) * t1.cast<cplx>() + cplx(c, d) * t2.cast<cplx>());
    }
  };
  perturb(t.t_E, 0);
  perturb(t.n_H, 1);
  return t;
}

double relative_trace_difference(const TraceData& a, const TraceData& b) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_trace_difference: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a.t_E[i] - b.t_E[i]).squaredNorm() + (a.n_H[i] - b.n_H[i]).squaredNorm();
    den += b.t_E[i].squaredNorm() + b.n_H[i].squaredNorm();
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace carleman
