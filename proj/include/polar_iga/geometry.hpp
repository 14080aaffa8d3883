#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "polar_iga/knots.hpp"

namespace polar_iga {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
double norm(Point2 a);

/// NURBS patch that collapses the parametric edge zeta1 = 0 into a single
/// physical point (the polar point), which is the corner of the domain.
/// Construction enforces:
///  - kv_u is exactly {0,0,1,1} and kv_v has full interior multiplicity
///    with uniformly spaced breakpoints,
///  - every control point of the first row equals the polar point (0,0),
///  - the two rows carry identical weights, so the weight function depends
///    only on zeta2.
struct PolarPatch {
  KnotVector kv_u;  // radial direction, degree 1
  KnotVector kv_v;  // angular direction
  std::vector<Point2> control_points;  // row-major [i1 * num_v() + i2]
  std::vector<double> weights;
  Point2 polar_point{0.0, 0.0};
  double corner_angle = 0.0;  // omega in (0, 2*pi]

  int num_u() const { return kv_u.num_basis(); }
  int num_v() const { return kv_v.num_basis(); }
  const Point2& control(int i1, int i2) const { return control_points[i1 * num_v() + i2]; }
  double weight(int i1, int i2) const { return weights[i1 * num_v() + i2]; }
};

/// Throws std::invalid_argument when any of the polar assumptions fails.
void validate_polar_patch(const PolarPatch& patch);

/// Circular sector of angle omega built from `segments` rational quadratic
/// arcs (each spanning omega/segments < pi). The outer control row realizes
/// the exact unit arc.
PolarPatch make_circular_sector(double omega, int segments);

/// Segment count used when none is requested: ceil(omega / (pi/2)), except
/// the three-segment layout for omega = 5*pi/3.
int default_sector_segments(double omega);

/// L-shaped domain: bilinear patch through the boundary polyline
/// (1,0), (1,1), (-1,1), (-1,-1), (0,-1) with all weights 1, omega = 3*pi/2.
PolarPatch make_l_shape();

Point2 map_point(const PolarPatch& patch, double u, double v);

/// Boundary curve F(1, v) of the patch (the edge away from the corner).
Point2 boundary_curve(const PolarPatch& patch, double v);

struct GeometryJacobian {
  double dx_du = 0.0, dx_dv = 0.0;
  double dy_du = 0.0, dy_dv = 0.0;
  double det = 0.0;
};

GeometryJacobian jacobian(const PolarPatch& patch, double u, double v);

/// Reference parameterization in polar coordinates,
///   G(r, phi) = r * R(Phi(phi)) * (cos Phi(phi), sin Phi(phi)),
/// with the piecewise-linear angle map Phi and radius function R of the
/// supported model domains.
struct ReferenceMap {
  enum class Kind { sector, lshape };

  Kind kind = Kind::sector;
  double omega = 0.0;

  double angle(double phi) const;    // Phi: [0,1] -> [0, omega]
  double radius(double Phi) const;   // R
  Point2 boundary(double phi) const;
  Point2 map(double r, double phi) const;
};

ReferenceMap make_reference_map(ReferenceMap::Kind kind, double omega);

/// Componentwise comparison of the patch boundary curve against the
/// reference map on a uniform phi grid (endpoints excluded). The identical_*
/// lists report maximal grid runs where the component difference stays
/// below 1e-12.
struct ReferenceComparison {
  double max_diff = 0.0;
  double max_diff_x = 0.0;
  double max_diff_y = 0.0;
  std::vector<Interval> identical_x;
  std::vector<Interval> identical_y;
};

ReferenceComparison compare_to_reference(const PolarPatch& patch, const ReferenceMap& ref,
                                         int n_samples);

/// JSON (de)serialization. Schema: degrees, knots_u, knots_v, control_points
/// (row-major [x, y] pairs), weights, corner_angle.
std::string patch_to_json(const PolarPatch& patch);
PolarPatch patch_from_json(const std::string& text);
void save_patch(const PolarPatch& patch, const std::string& path);
PolarPatch load_patch(const std::string& path);

}  // namespace polar_iga
