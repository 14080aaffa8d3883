#include "polar_iga/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace polar_iga {

BezierMesh build_mesh(const KnotVector& kv_u, const KnotVector& kv_v, double grading_mu) {
  BezierMesh mesh;
  mesh.breakpoints_u = kv_u.breakpoints;
  mesh.breakpoints_v = kv_v.breakpoints;
  mesh.grading_mu = grading_mu;
  mesh.widths_u.resize(kv_u.num_elements());
  mesh.widths_v.resize(kv_v.num_elements());
  for (int j = 0; j < kv_u.num_elements(); ++j) {
    mesh.widths_u[j] = mesh.breakpoints_u[j + 1] - mesh.breakpoints_u[j];
  }
  for (int j = 0; j < kv_v.num_elements(); ++j) {
    mesh.widths_v[j] = mesh.breakpoints_v[j + 1] - mesh.breakpoints_v[j];
  }
  double h = 0.0;
  for (double wu : mesh.widths_u) {
    for (double wv : mesh.widths_v) h = std::max(h, std::hypot(wu, wv));
  }
  mesh.global_h = h;
  return mesh;
}

BezierMesh build_mesh(const KnotVector& kv_u, const KnotVector& kv_v) {
  return build_mesh(kv_u, kv_v, std::numeric_limits<double>::quiet_NaN());
}

QuasiUniformityReport quasi_uniformity_report(const BezierMesh& mesh) {
  if (!(mesh.grading_mu > 0.0)) {
    throw std::invalid_argument("quasi_uniformity_report: mesh carries no grading parameter");
  }
  QuasiUniformityReport report;
  report.theta1 = std::pow(2.0, 1.0 / mesh.grading_mu) - 1.0;
  report.ratios.resize(std::max(0, mesh.num_columns() - 1));
  for (int j = 0; j + 1 < mesh.num_columns(); ++j) {
    report.ratios[j] = mesh.widths_u[j] / mesh.widths_u[j + 1];
  }
  return report;
}

DomainSplit split_domain(const BezierMesh& mesh, int p1) {
  if (p1 < 1) throw std::invalid_argument("split_domain: degree must be >= 1");
  const int columns = mesh.num_columns();
  if (columns < p1 + 1) throw std::invalid_argument("split_domain: too few columns for the corner region");
  DomainSplit split;
  for (int j = 0; j < columns; ++j) {
    (j <= p1 ? split.corner_columns : split.ring_columns).push_back(j);
  }
  return split;
}

SizeBoundReport size_bound_report(const BezierMesh& mesh) {
  if (!(mesh.grading_mu > 0.0)) {
    throw std::invalid_argument("size_bound_report: mesh carries no grading parameter");
  }
  const double mu = mesh.grading_mu;
  const double h1 = 1.0 / mesh.num_columns();
  SizeBoundReport report;
  for (int j = 1; j < mesh.num_columns(); ++j) {
    SizeBoundEntry e;
    e.column = j;
    e.width = mesh.widths_u[j];
    e.bound_right = (1.0 / mu) * h1 * std::pow(mesh.breakpoints_u[j + 1], 1.0 - mu);
    e.bound_left = (1.0 / mu) * h1 * std::pow(mesh.breakpoints_u[j], 1.0 - mu);
    if (e.width > e.bound_right * (1.0 + 1e-12)) report.right_bound_ok = false;
    if (e.width > e.bound_left * (1.0 + 1e-12)) ++report.left_bound_violations;
    report.entries.push_back(e);
  }
  return report;
}

void write_mesh_csv(const BezierMesh& mesh, std::ostream& os) {
  os << "j1,j2,z1_lo,z1_hi,z2_lo,z2_hi\n";
  char line[256];
  for (int j1 = 0; j1 < mesh.num_columns(); ++j1) {
    for (int j2 = 0; j2 < mesh.num_rows(); ++j2) {
      std::snprintf(line, sizeof(line), "%d,%d,%.17g,%.17g,%.17g,%.17g\n", j1 + 1, j2 + 1,
                    mesh.breakpoints_u[j1], mesh.breakpoints_u[j1 + 1], mesh.breakpoints_v[j2],
                    mesh.breakpoints_v[j2 + 1]);
      os << line;
    }
  }
}

}  // namespace polar_iga
