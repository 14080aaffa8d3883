#pragma once

#include <iosfwd>
#include <vector>

#include "polar_iga/knots.hpp"

namespace polar_iga {

/// Tensor-product Bezier mesh spanned by the breakpoints of two knot
/// vectors. Element (j1, j2) is (breakpoints_u[j1], breakpoints_u[j1+1]) x
/// (breakpoints_v[j2], breakpoints_v[j2+1]); indices are 0-based.
struct BezierMesh {
  std::vector<double> breakpoints_u;
  std::vector<double> breakpoints_v;
  std::vector<double> widths_u;
  std::vector<double> widths_v;
  double grading_mu = 0.0;  // NaN when the mesh was not built from a graded refinement
  double global_h = 0.0;    // max element diameter in the parametric domain

  int num_columns() const { return static_cast<int>(widths_u.size()); }
  int num_rows() const { return static_cast<int>(widths_v.size()); }
  int num_elements() const { return num_columns() * num_rows(); }
};

BezierMesh build_mesh(const KnotVector& kv_u, const KnotVector& kv_v);
BezierMesh build_mesh(const KnotVector& kv_u, const KnotVector& kv_v, double grading_mu);

/// Local quasi-uniformity data of the graded direction: theta1 = 2^(1/mu)-1
/// and the ratio sequence Theta1(j) = h_{1,j} / h_{1,j+1}.
struct QuasiUniformityReport {
  double theta1 = 0.0;
  std::vector<double> ratios;
};

QuasiUniformityReport quasi_uniformity_report(const BezierMesh& mesh);

/// Column split at j1 <= p1 (0-based): corner columns are those whose
/// support extension touches the collapsed edge.
struct DomainSplit {
  std::vector<int> corner_columns;
  std::vector<int> ring_columns;
};

DomainSplit split_domain(const BezierMesh& mesh, int p1);

/// Element-size bounds of the graded direction for columns j1 >= 1:
/// width <= (1/mu) * h1 * z_{j1+1}^(1-mu) holds by the mean value theorem
/// (bound_right); the same bound with the left breakpoint (bound_left) can
/// fail marginally and violations are only counted, not fatal.
struct SizeBoundEntry {
  int column = 0;
  double width = 0.0;
  double bound_right = 0.0;
  double bound_left = 0.0;
};

struct SizeBoundReport {
  std::vector<SizeBoundEntry> entries;
  bool right_bound_ok = true;
  int left_bound_violations = 0;
};

SizeBoundReport size_bound_report(const BezierMesh& mesh);

/// CSV dump, one line per element: j1,j2,z1_lo,z1_hi,z2_lo,z2_hi
void write_mesh_csv(const BezierMesh& mesh, std::ostream& os);

}  // namespace polar_iga
