#pragma once

#include <functional>
#include <vector>

#include "polar_iga/dual_basis.hpp"
#include "polar_iga/geometry.hpp"
#include "polar_iga/mesh.hpp"

namespace polar_iga {

/// Physical boundary edges of a polar patch. The collapsed parametric edge
/// maps to the corner and carries no boundary condition of its own.
enum class Edge {
  outer,      // image of zeta1 = 1 (the edge away from the corner)
  angle_min,  // image of zeta2 = 0
  angle_max,  // image of zeta2 = 1
};

/// C0-smooth polar NURBS space on a refined polar patch: the tensor-product
/// space with all degrees of freedom of the collapsed edge merged into one.
/// The merged parametric basis function is the first radial B-spline,
/// independent of zeta2.
///
/// The refined geometry (degrees elevated, knots inserted, map unchanged) is
/// carried along: radial homogeneous coefficients of the linear factor zeta1
/// are the Greville abscissae, angular coefficients come from the dual
/// functionals of the refined angular space, which represents the coarse
/// boundary data exactly.
class PolarSplineSpace {
 public:
  /// degree = (p1, p2), breakpoint targets (N1, N2), grading mu in (0, 1].
  /// N2 is a target: each geometry span is subdivided into
  /// ceil((N2-1)/spans) equal parts so that geometry junctions stay
  /// breakpoints (at multiplicity p2, preserving the C0 lines of the patch).
  PolarSplineSpace(const PolarPatch& patch, int degree_u, int degree_v, int breakpoints_u,
                   int breakpoints_v, double grading);

  const PolarPatch& patch() const { return patch_; }
  const KnotVector& kv_u() const { return kv_u_; }
  const KnotVector& kv_v() const { return kv_v_; }
  double grading() const { return mu_; }
  int num_u() const { return kv_u_.num_basis(); }
  int num_v() const { return kv_v_.num_basis(); }

  /// Refinement parameter h = max(h1, h2) of the underlying uniform
  /// subdivision (h1 = 1/(N1-1)); the graded breakpoints are images of the
  /// uniform ones under t -> t^(1/mu).
  double refinement_parameter() const;

  int n_dofs() const { return 1 + (num_u() - 1) * num_v(); }
  int polar_dof() const { return 0; }
  int global_dof(int i1, int i2) const { return i1 == 0 ? 0 : 1 + (i1 - 1) * num_v() + i2; }

  BezierMesh mesh() const { return build_mesh(kv_u_, kv_v_, mu_); }

  // -- geometry through the refined representation (identical map F) --
  Point2 map_point(double u, double v) const;
  GeometryJacobian jacobian(double u, double v) const;
  double weight_value(double v) const;  // W depends on zeta2 only
  double column_weight(int i2) const { return col_weights_[i2]; }

  // -- basis --
  struct BasisEntry {
    int dof = 0;
    double value = 0.0;
    double du = 0.0;  // parametric derivatives
    double dv = 0.0;
  };

  /// Rational basis values (and parametric first derivatives when
  /// max_derivative = 1) of all functions supported at (u, v), with the
  /// collapsed-edge contributions merged into the polar DOF.
  void eval_basis(double u, double v, int max_derivative, std::vector<BasisEntry>& out) const;
  std::vector<BasisEntry> eval_basis(double u, double v, int max_derivative) const;

  /// Value and parametric gradient of a coefficient vector (size n_dofs).
  /// Derivative orders above 1 are not offered; the second-order model
  /// problem never needs them.
  struct FieldValue {
    double value = 0.0;
    double du = 0.0;
    double dv = 0.0;
  };
  FieldValue evaluate(const std::vector<double>& coefficients, double u, double v,
                      int max_derivative) const;

  /// Parametric preimage of a physical point: the factorization
  /// F(u, v) = u * F2(v) is inverted by bisecting the boundary angle (the
  /// patch boundary sweeps the corner angle monotonically) and polishing
  /// with Newton steps on F. Throws when the point is not in the closure of
  /// the domain (tolerance 1e-8).
  Point2 parametric_preimage(Point2 x) const;

  /// Global DOFs whose basis functions have a nonzero trace on a Dirichlet
  /// edge. The polar DOF is included exactly when angle_min or angle_max is
  /// constrained. Throws when the edge set is empty.
  std::vector<int> dirichlet_dofs(const std::vector<Edge>& edges) const;

  /// Modified spline projector: coefficients of
  ///   (Pi(W (v o F)) / W) o F^{-1}
  /// with endpoint-interpolating dual functionals in both directions and the
  /// polar functional w -> w(0) in the radial direction, so the projected
  /// function takes the value v(P) at the polar point and every member of
  /// the space is reproduced exactly.
  std::vector<double> project(const std::function<double(Point2)>& v) const;

  const DualBasis& dual_u() const { return dual_u_; }
  const DualBasis& dual_v() const { return dual_v_; }

 private:
  struct Homogeneous;
  Homogeneous homogeneous(double u, double v, bool with_derivatives) const;

  PolarPatch patch_;
  KnotVector kv_u_, kv_v_;
  double mu_ = 1.0;
  DualBasis dual_u_, dual_v_;
  std::vector<double> greville_u_;            // radial coefficients of zeta1
  std::vector<double> col_weights_;           // refined weights, identical per column
  std::vector<double> boundary_x_, boundary_y_;  // angular homogeneous coefficients of W*F2
};

}  // namespace polar_iga
