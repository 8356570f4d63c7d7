#pragma once

// Exact time-harmonic Maxwell solutions used as oracles, and Cauchy data
// generation with seeded noise.

#include <cstdint>

#include "carleman/geometry.hpp"

namespace carleman {

struct SyntheticSolution {
  enum class Kind { PlaneWave, Dipole, Zero };

  Kind kind = Kind::PlaneWave;
  WaveNumber k;
  /// Plane wave: unit propagation direction and a polarization orthogonal to it.
  Vec3 direction = Vec3::UnitZ();
  CVec3 polarization = CVec3(1.0, 0.0, 0.0);
  /// Dipole: source point and moment.
  Vec3 source = Vec3::Zero();
  CVec3 moment = CVec3(0.0, 0.0, 1.0);

  /// Throws std::invalid_argument when |d| != 1 or |d.p| > 1e-12, and
  /// std::domain_error for k = 0.
  void validate() const;

  static SyntheticSolution plane_wave(const WaveNumber& k, const Vec3& d, const CVec3& p);
  static SyntheticSolution dipole(const WaveNumber& k, const Vec3& x0, const CVec3& p);
  static SyntheticSolution zero(const WaveNumber& k);
};

/// E = p exp(ik d.x), H = (d x p) exp(ik d.x).
FieldSample eval_plane_wave(const SyntheticSolution& s, const Vec3& x);

/// H = curl(p e(x - x0)) = grad e x p, E = -(1/ik) curl H.
FieldSample eval_dipole(const SyntheticSolution& s, const Vec3& x);

/// Dispatches on s.kind.
FieldSample eval_solution(const SyntheticSolution& s, const Vec3& x);

/// Field and analytic curls.
FieldWithCurls eval_with_curls(const SyntheticSolution& s, const Vec3& x);

/// Exact traces plus complex Gaussian noise. Each node gets tangent-plane noise
/// whose expected squared norm is noise_rel^2 times the mean squared trace
/// norm, independently for t_E and n_H. Bit-identical for a fixed seed.
TraceData make_cauchy_data(const SyntheticSolution& s, const SurfaceMesh& mesh, double noise_rel, std::uint64_t seed);

/// sqrt(sum |a_i - b_i|^2 / sum |b_i|^2) over both trace fields.
double relative_trace_difference(const TraceData& a, const TraceData& b);

}  // namespace carleman
