#include "carleman/potentials.hpp"

#include <stdexcept>

namespace carleman {

std::vector<CVec6> boundary_density(const SurfaceMesh& mesh, const TraceData& traces) {
  if (traces.size() != mesh.size()) throw std::invalid_argument("boundary density: trace count differs from mesh size");
  std::vector<CVec6> dens(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const CVec3 nu = mesh.normals[i].cast<cplx>();
    dens[i] << traces.n_H[i], cross(nu, traces.t_E[i]);
  }
  return dens;
}

KernelMatrix assemble_kernel(const CVec3& g, const CMat3& D, const WaveNumber& k) {
  const cplx inv_ik = 1.0 / (I * k.value());
  const CMat3 gx = cross_matrix(g);
  KernelMatrix K;
  K.topLeftCorner<3, 3>() = -inv_ik * D;
  K.topRightCorner<3, 3>() = gx;
  K.bottomLeftCorner<3, 3>() = gx;
  K.bottomRightCorner<3, 3>() = inv_ik * D;
  return K;
}

KernelMatrix kernel_block(const Vec3& x, const Vec3& y, const WaveNumber& k) {
  k.require_nonzero("kernel_block");
  const Vec3 r = x - y;
  if (r.norm() == 0.0) throw std::domain_error("kernel_block: target coincides with source");
  const auto e = helmholtz_fundamental(r, k);
  const cplx k2 = k.value() * k.value();
  return assemble_kernel(e.gradient, e.hessian + k2 * e.value * CMat3::Identity(), k);
}

namespace {

FieldSample integrate(const SurfaceMesh& mesh, const TraceData& traces, const Vec3& x, const WaveNumber& k) {
  k.require_nonzero("boundary potential");
  const auto dens = boundary_density(mesh, traces);
  CVec6 acc = CVec6::Zero();
  for (std::size_t i = 0; i < mesh.size(); ++i) acc += mesh.weights[i] * (kernel_block(x, mesh.nodes[i], k) * dens[i]);
  FieldSample f = FieldSample::from_stacked(acc, x);
  f.near_surface = mesh.is_near(x);
  return f;
}

}  // namespace

FieldSample stratton_chu_eval(const SurfaceMesh& mesh, const TraceData& traces, const Vec3& x, const WaveNumber& k) {
  return integrate(mesh, traces, x, k);
}

FieldSample cauchy_integral_G(const SurfaceMesh& mesh_S, const TraceData& data, const Vec3& x, const WaveNumber& k) {
  return integrate(mesh_S, data, x, k);
}

FieldWithCurls cauchy_integral_G_with_curls(const SurfaceMesh& mesh_S, const TraceData& data, const Vec3& x,
                                            const WaveNumber& k) {
  k.require_nonzero("cauchy_integral_G");
  const auto dens = boundary_density(mesh_S, data);
  const cplx ik = I * k.value();
  const cplx k2 = k.value() * k.value();
  FieldWithCurls out;
  for (std::size_t i = 0; i < mesh_S.size(); ++i) {
    const Vec3 r = x - mesh_S.nodes[i];
    if (r.norm() == 0.0) throw std::domain_error("cauchy_integral_G: target coincides with a node");
    const auto e = helmholtz_fundamental(r, k);
    const CVec3& g = e.gradient;
    const CMat3 D = e.hessian + k2 * e.value * CMat3::Identity();
    const CVec3 a = dens[i].head<3>();
    const CVec3 b = dens[i].tail<3>();
    const double w = mesh_S.weights[i];
    out.E += w * (-(D * a) / ik + cross(g, b));
    out.H += w * (cross(g, a) + (D * b) / ik);
    // curl (e v) = g x v, curl (D v) = k^2 g x v, curl (g x v) = D v.
    out.curl_E += w * (-(k2 / ik) * cross(g, a) + D * b);
    out.curl_H += w * (D * a + (k2 / ik) * cross(g, b));
  }
  return out;
}

double maxwell_residual(const FieldWithCurls& f, const WaveNumber& k) {
  const cplx ik = I * k.value();
  const double res = (ik * f.E + f.curl_H).norm() + (-ik * f.H + f.curl_E).norm();
  const double scale = std::abs(k.value()) * (f.E.norm() + f.H.norm());
  return scale > 0.0 ? res / scale : res;
}

}  // namespace carleman
