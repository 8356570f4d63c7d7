#pragma once

// Cap-shaped domains inside a ball, product quadrature on their boundary
// pieces, and boundary traces of vector fields.
//
// Trace conventions. At a boundary node with outward unit normal nu:
//   t_E = E - (nu.E) nu   tangential part of the electric field;
//   n_H = nu x H          normal part of H read as a 2-form, carried by the
//                         tangential components of H.
// Together they are the Cauchy data of the Maxwell system.

#include <iosfwd>
#include <vector>

#include "carleman/fields.hpp"
#include "carleman/specialfn.hpp"

namespace carleman {

/// X = { eps < |x| < R, polar angle < cap_angle }. Its boundary is the
/// interior surface S (the sphere patch |x| = eps plus, for a partial cap, the
/// conical junction theta = cap_angle) and the outer cap on |x| = R.
/// cap_angle = pi gives the annulus eps <= |x| <= R with S the full inner sphere.
struct CapDomain {
  double R = 2.0;
  double cap_angle = kPi;
  double eps = 1.0;

  bool is_annulus() const { return cap_angle >= kPi - 1e-12; }
  /// Open domain membership.
  bool contains(const Vec3& x) const;
};

CapDomain make_cap_domain(double R, double cap_angle, double cap_radius);

enum class PatchTag { S, Outer };

const char* to_string(PatchTag tag);

struct SurfaceMesh {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  std::vector<Vec3> normals;
  std::vector<PatchTag> tags;

  std::size_t size() const { return nodes.size(); }
  bool empty() const { return nodes.empty(); }
  double total_weight() const;
  /// Largest local node spacing, estimated as max sqrt(weight).
  double spacing() const;
  /// Smallest distance from x to a node.
  double distance_to(const Vec3& x) const;
  bool is_near(const Vec3& x, double spacings = 3.0) const { return distance_to(x) < spacings * spacing(); }

  SurfaceMesh restricted(PatchTag tag) const;
  void append(const SurfaceMesh& other);
};

/// Sphere patch |y| = radius, polar angle in [0, max_polar]. Normals point
/// along +y/|y| when outward_radial, otherwise toward the origin.
SurfaceMesh mesh_sphere_patch(double radius, double max_polar, int resolution, bool outward_radial, PatchTag tag);

/// Full sphere with outward normals; the boundary of a ball.
SurfaceMesh mesh_sphere(double radius, int resolution, PatchTag tag = PatchTag::Outer);

/// Boundary of the cap domain, pieces tagged S or Outer, normals outward from X.
/// resolution >= 2 is the Gauss-Legendre count per piece; the azimuth uses 2x.
SurfaceMesh mesh_boundary(const CapDomain& domain, int resolution);

/// Tab-free comma-delimited table: x,y,z,weight,nx,ny,nz,tag.
void write_mesh_csv(std::ostream& os, const SurfaceMesh& mesh);

struct TraceData {
  std::vector<CVec3> t_E;
  std::vector<CVec3> n_H;

  std::size_t size() const { return t_E.size(); }
  /// Largest normal component of t_E or n_H, relative to the trace size.
  double tangency_defect(const SurfaceMesh& mesh) const;
  static TraceData zeros(std::size_t n);
};

TraceData take_traces(const FieldEvaluator& field, const SurfaceMesh& mesh);

/// Restrict traces on a full boundary mesh to nodes carrying `tag`, matching
/// SurfaceMesh::restricted.
TraceData restrict_traces(const TraceData& traces, const SurfaceMesh& mesh, PatchTag tag);

/// Maximum over nodes of the trace identities satisfied by any Maxwell solution:
///   |nu.E + (1/ik) nu.curl H|,  |t(H) - (1/ik) t(curl E)|,  |nu.H - (1/ik) nu.curl E|.
double derived_trace_check(const CurlEvaluator& field, const SurfaceMesh& mesh, const WaveNumber& k);

}  // namespace carleman
