#pragma once

#include <functional>

#include "carleman/types.hpp"

namespace carleman {

/// Electric and magnetic field at a point.
struct FieldSample {
  CVec3 E = CVec3::Zero();
  CVec3 H = CVec3::Zero();
  Vec3 at = Vec3::Zero();
  /// Set when the point lies within three mesh spacings of the integration
  /// surface, where the product quadrature loses accuracy.
  bool near_surface = false;

  CVec6 stacked() const {
    CVec6 v;
    v << E, H;
    return v;
  }
  static FieldSample from_stacked(const CVec6& v, const Vec3& at) {
    FieldSample s;
    s.E = v.head<3>();
    s.H = v.tail<3>();
    s.at = at;
    return s;
  }
};

/// Field together with its curls, as produced by analytic test solutions.
struct FieldWithCurls {
  CVec3 E = CVec3::Zero();
  CVec3 H = CVec3::Zero();
  CVec3 curl_E = CVec3::Zero();
  CVec3 curl_H = CVec3::Zero();
};

using FieldEvaluator = std::function<FieldSample(const Vec3&)>;
using CurlEvaluator = std::function<FieldWithCurls(const Vec3&)>;

}  // namespace carleman
