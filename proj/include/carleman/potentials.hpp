#pragma once

// Boundary potentials of the Maxwell system built from the Helmholtz
// fundamental solution e. A boundary density is the pair
//   a = n_H = nu x H,  b = nu x t_E,
// stacked as a 6-vector. The kernel K(x - y) maps it to (E, H):
//   E = -(1/ik) D a + g x b,   H = g x a + (1/ik) D b,
// with g = grad e(x - y) and D = Hess e(x - y) + k^2 e(x - y) I, which is
// curl curl (e .) off the diagonal. Integrated over a closed boundary this
// reproduces the field inside and vanishes outside.

#include "carleman/geometry.hpp"

namespace carleman {

/// Density (n_H, nu x t_E) at every node of the mesh.
std::vector<CVec6> boundary_density(const SurfaceMesh& mesh, const TraceData& traces);

/// 6x6 kernel assembled from g and D. Shared with the truncated series, where
/// e is replaced by a partial sum of its expansion.
KernelMatrix assemble_kernel(const CVec3& g, const CMat3& D, const WaveNumber& k);

/// K(x - y); domain error when x = y or k = 0.
KernelMatrix kernel_block(const Vec3& x, const Vec3& y, const WaveNumber& k);

/// sum_i w_i K(x - y_i) density_i over the whole boundary. Flags near_surface
/// when x is within three mesh spacings of a node.
FieldSample stratton_chu_eval(const SurfaceMesh& mesh, const TraceData& traces, const Vec3& x, const WaveNumber& k);

/// The same integral over the part S of the boundary only.
FieldSample cauchy_integral_G(const SurfaceMesh& mesh_S, const TraceData& data, const Vec3& x, const WaveNumber& k);

/// G together with curl E and curl H from analytic kernel derivatives.
FieldWithCurls cauchy_integral_G_with_curls(const SurfaceMesh& mesh_S, const TraceData& data, const Vec3& x,
                                            const WaveNumber& k);

/// (|ikE + curl H| + |-ikH + curl E|) / (|k| (|E| + |H|)); absolute when the field vanishes.
double maxwell_residual(const FieldWithCurls& f, const WaveNumber& k);

}  // namespace carleman
