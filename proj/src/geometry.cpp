#include "carleman/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace carleman {

bool CapDomain::contains(const Vec3& x) const {
  const double r = x.norm();
  if (!(r > eps && r < R)) return false;
  if (is_annulus()) return true;
  const double theta = std::acos(std::clamp(x.z() / r, -1.0, 1.0));
  return theta < cap_angle;
}

CapDomain make_cap_domain(double R, double cap_angle, double cap_radius) {
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("domain: R must be positive");
  if (!(cap_angle > 0.0 && cap_angle <= kPi)) throw std::invalid_argument("domain: cap_angle must lie in (0, pi]");
  if (!(cap_radius > 0.0 && cap_radius < R))
    throw std::invalid_argument("domain: cap_radius must satisfy 0 < cap_radius < R");
  return CapDomain{R, cap_angle, cap_radius};
}

const char* to_string(PatchTag tag) { return tag == PatchTag::S ? "S" : "outer"; }

double SurfaceMesh::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double SurfaceMesh::spacing() const {
  double h = 0.0;
  for (double w : weights) h = std::max(h, std::sqrt(w));
  return h;
}

double SurfaceMesh::distance_to(const Vec3& x) const {
  double d2 = std::numeric_limits<double>::infinity();
  for (const auto& y : nodes) d2 = std::min(d2, (x - y).squaredNorm());
  return std::sqrt(d2);
}

SurfaceMesh SurfaceMesh::restricted(PatchTag tag) const {
  SurfaceMesh out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (tags[i] != tag) continue;
    out.nodes.push_back(nodes[i]);
    out.weights.push_back(weights[i]);
    out.normals.push_back(normals[i]);
    out.tags.push_back(tags[i]);
  }
  return out;
}

void SurfaceMesh::append(const SurfaceMesh& other) {
  nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
  normals.insert(normals.end(), other.normals.begin(), other.normals.end());
  tags.insert(tags.end(), other.tags.begin(), other.tags.end());
}

namespace {

void check_resolution(int resolution) {
  if (resolution < 2) throw std::invalid_argument("mesh: resolution must be at least 2");
}

}  // namespace

SurfaceMesh mesh_sphere_patch(double radius, double max_polar, int resolution, bool outward_radial, PatchTag tag) {
  check_resolution(resolution);
  if (!(radius > 0.0)) throw std::invalid_argument("mesh: radius must be positive");
  if (!(max_polar > 0.0 && max_polar <= kPi)) throw std::invalid_argument("mesh: polar extent must lie in (0, pi]");
  const auto u = gauss_legendre(resolution, std::cos(max_polar), 1.0);
  const int nphi = 2 * resolution;
  const double dphi = 2.0 * kPi / nphi;
  const double r2 = radius * radius;
  SurfaceMesh mesh;
  mesh.nodes.reserve(static_cast<std::size_t>(resolution * nphi));
  for (int a = 0; a < resolution; ++a) {
    const double ct = u.nodes[a];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int b = 0; b < nphi; ++b) {
      const double phi = (b + 0.5) * dphi;
      const Vec3 dir(st * std::cos(phi), st * std::sin(phi), ct);
      mesh.nodes.push_back(radius * dir);
      mesh.weights.push_back(r2 * u.weights[a] * dphi);
      mesh.normals.push_back(outward_radial ? dir : Vec3(-dir));
      mesh.tags.push_back(tag);
    }
  }
  return mesh;
}

SurfaceMesh mesh_sphere(double radius, int resolution, PatchTag tag) {
  return mesh_sphere_patch(radius, kPi, resolution, true, tag);
}

namespace {

// Lateral surface theta = alpha, r in [r0, r1]. Outward from {theta < alpha}.
SurfaceMesh mesh_cone(double alpha, double r0, double r1, int resolution) {
  const auto rr = gauss_legendre(resolution, r0, r1);
  const int nphi = 2 * resolution;
  const double dphi = 2.0 * kPi / nphi;
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  SurfaceMesh mesh;
  for (int a = 0; a < resolution; ++a) {
    const double r = rr.nodes[a];
    for (int b = 0; b < nphi; ++b) {
      const double phi = (b + 0.5) * dphi;
      const double cp = std::cos(phi), sp = std::sin(phi);
      mesh.nodes.emplace_back(r * sa * cp, r * sa * sp, r * ca);
      mesh.weights.push_back(r * sa * rr.weights[a] * dphi);
      mesh.normals.emplace_back(ca * cp, ca * sp, -sa);
      mesh.tags.push_back(PatchTag::S);
    }
  }
  return mesh;
}

}  // namespace

SurfaceMesh mesh_boundary(const CapDomain& domain, int resolution) {
  check_resolution(resolution);
  SurfaceMesh mesh = mesh_sphere_patch(domain.eps, domain.cap_angle, resolution, false, PatchTag::S);
  if (!domain.is_annulus()) mesh.append(mesh_cone(domain.cap_angle, domain.eps, domain.R, resolution));
  mesh.append(mesh_sphere_patch(domain.R, domain.cap_angle, resolution, true, PatchTag::Outer));
  return mesh;
}

void write_mesh_csv(std::ostream& os, const SurfaceMesh& mesh) {
  os << "x,y,z,weight,nx,ny,nz,tag\n";
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const auto& y = mesh.nodes[i];
    const auto& n = mesh.normals[i];
    fmt::print(os, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", y.x(), y.y(), y.z(),
               mesh.weights[i], n.x(), n.y(), n.z(), to_string(mesh.tags[i]));
  }
}

double TraceData::tangency_defect(const SurfaceMesh& mesh) const {
  double defect = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const CVec3 nu = mesh.normals[i].cast<cplx>();
    const double scale = std::max({t_E[i].norm(), n_H[i].norm(), 1e-300});
    defect = std::max(defect, std::abs(nu.dot(t_E[i])) / scale);
    defect = std::max(defect, std::abs(nu.dot(n_H[i])) / scale);
  }
  return defect;
}

TraceData TraceData::zeros(std::size_t n) {
  TraceData t;
  t.t_E.assign(n, CVec3::Zero());
  t.n_H.assign(n, CVec3::Zero());
  return t;
}

TraceData take_traces(const FieldEvaluator& field, const SurfaceMesh& mesh) {
  TraceData t;
  t.t_E.reserve(mesh.size());
  t.n_H.reserve(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const FieldSample f = field(mesh.nodes[i]);
    const CVec3 nu = mesh.normals[i].cast<cplx>();
    // nu is real, so the transpose product is the plain Euclidean pairing.
    t.t_E.push_back(f.E - (nu.transpose() * f.E)(0) * nu);
    t.n_H.push_back(cross(nu, f.H));
  }
  return t;
}

TraceData restrict_traces(const TraceData& traces, const SurfaceMesh& mesh, PatchTag tag) {
  if (traces.size() != mesh.size()) throw std::invalid_argument("restrict_traces: size mismatch");
  TraceData out;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (mesh.tags[i] != tag) continue;
    out.t_E.push_back(traces.t_E[i]);
    out.n_H.push_back(traces.n_H[i]);
  }
  return out;
}

double derived_trace_check(const CurlEvaluator& field, const SurfaceMesh& mesh, const WaveNumber& k) {
  k.require_nonzero("derived_trace_check");
  const cplx ik = I * k.value();
  double worst = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const FieldWithCurls f = field(mesh.nodes[i]);
    const CVec3 nu = mesh.normals[i].cast<cplx>();
    auto ndot = [&](const CVec3& v) { return (nu.transpose() * v)(0); };
    auto tang = [&](const CVec3& v) -> CVec3 { return v - ndot(v) * nu; };
    worst = std::max(worst, std::abs(ndot(f.E) + ndot(f.curl_H) / ik));
    worst = std::max(worst, (tang(f.H) - tang(f.curl_E) / ik).norm());
    worst = std::max(worst, std::abs(ndot(f.H) - ndot(f.curl_E) / ik));
  }
  return worst;
}

}  // namespace carleman
