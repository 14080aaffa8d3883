#include "polar_iga/polar_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "polar_iga/parallel.hpp"

namespace polar_iga {

namespace {

KnotVector refine_angular(const KnotVector& geometry_kv, int degree, int breakpoint_target) {
  const int spans = geometry_kv.num_elements();
  // Every geometry span is subdivided the same number of times as the single
  // radial span (standard knot refinement applied per span), so h2 = h1 /
  // spans stays proportional to h1 across the levels of a study.
  const int subdivisions = std::max(1, breakpoint_target - 1);
  std::vector<double> z;
  std::vector<int> mult;
  z.push_back(0.0);
  for (int s = 0; s < spans; ++s) {
    const double a = geometry_kv.breakpoints[s];
    const double b = geometry_kv.breakpoints[s + 1];
    for (int t = 1; t < subdivisions; ++t) {
      z.push_back(a + (b - a) * t / subdivisions);
      mult.push_back(1);
    }
    z.push_back(b);
    // geometry junctions keep the C0 line of the patch
    if (s + 1 < spans) mult.push_back(degree);
  }
  return make_open_knot_vector(z, mult, degree);
}

double coarse_weight(const PolarPatch& patch, double v, BasisEvaluation& scratch) {
  eval_basis(patch.kv_v, v, 0, scratch);
  double w = 0.0;
  for (int j = 0; j < scratch.count; ++j) w += patch.weight(1, scratch.first_index + j) * scratch.value(0, j);
  return w;
}

Point2 coarse_weighted_boundary(const PolarPatch& patch, double v, BasisEvaluation& scratch) {
  eval_basis(patch.kv_v, v, 0, scratch);
  Point2 g{0.0, 0.0};
  for (int j = 0; j < scratch.count; ++j) {
    const int i2 = scratch.first_index + j;
    const double wb = patch.weight(1, i2) * scratch.value(0, j);
    g.x += wb * patch.control(1, i2).x;
    g.y += wb * patch.control(1, i2).y;
  }
  return g;
}

}  // namespace

PolarSplineSpace::PolarSplineSpace(const PolarPatch& patch, int degree_u, int degree_v,
                                   int breakpoints_u, int breakpoints_v, double grading)
    : patch_(patch),
      kv_u_(graded_refine(std::max(degree_u, 1), std::max(breakpoints_u, 2), grading)),
      kv_v_(refine_angular(patch.kv_v, degree_v, breakpoints_v)),
      mu_(grading),
      dual_u_(kv_u_, true),
      dual_v_(kv_v_, true) {
  validate_polar_patch(patch_);
  if (degree_u < 1) throw std::invalid_argument("PolarSplineSpace: radial degree must be >= 1");
  if (degree_v < patch.kv_v.degree) {
    throw std::invalid_argument("PolarSplineSpace: angular degree below the geometry degree");
  }
  if (breakpoints_u < 2 || breakpoints_v < 2) {
    throw std::invalid_argument("PolarSplineSpace: need at least two breakpoints per direction");
  }

  // Radial coefficients of the linear factor zeta1: Greville abscissae.
  const int p1 = kv_u_.degree;
  greville_u_.resize(num_u());
  for (int i = 0; i < num_u(); ++i) {
    double sum = 0.0;
    for (int k = 1; k <= p1; ++k) sum += kv_u_.knots[i + k];
    greville_u_[i] = p1 > 0 ? sum / p1 : kv_u_.knots[i];
  }

  // Angular coefficients of the weight function and of W * F2. The refined
  // space contains both exactly, so the dual coefficients reproduce them.
  BasisEvaluation scratch;
  col_weights_.resize(num_v());
  boundary_x_.resize(num_v());
  boundary_y_.resize(num_v());
  for (int i2 = 0; i2 < num_v(); ++i2) {
    col_weights_[i2] = dual_v_.apply(i2, [&](double v) { return coarse_weight(patch_, v, scratch); });
    boundary_x_[i2] = dual_v_.apply(i2, [&](double v) { return coarse_weighted_boundary(patch_, v, scratch).x; });
    boundary_y_[i2] = dual_v_.apply(i2, [&](double v) { return coarse_weighted_boundary(patch_, v, scratch).y; });
    if (!(col_weights_[i2] > 0.0)) throw std::runtime_error("PolarSplineSpace: refined weight not positive");
  }

  // The refinement must not move the map.
  double worst = 0.0;
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) {
      const double u = a / 6.0, v = b / 6.0;
      worst = std::max(worst, norm(map_point(u, v) - polar_iga::map_point(patch_, u, v)));
    }
  }
  if (worst > 1e-12) throw std::runtime_error("PolarSplineSpace: refined geometry deviates from the patch");
}

double PolarSplineSpace::refinement_parameter() const {
  const double h1 = 1.0 / (kv_u_.num_breakpoints() - 1);
  const double h2 = 1.0 / (kv_v_.num_breakpoints() - 1);
  return std::max(h1, h2);
}

struct PolarSplineSpace::Homogeneous {
  double su = 0.0, dsu = 0.0;       // sum greville * B_u and derivative
  double gx = 0.0, gy = 0.0, w = 0.0;
  double dgx = 0.0, dgy = 0.0, dw = 0.0;
};

PolarSplineSpace::Homogeneous PolarSplineSpace::homogeneous(double u, double v,
                                                            bool with_derivatives) const {
  const int order = with_derivatives ? 1 : 0;
  BasisEvaluation bu, bv;
  polar_iga::eval_basis(kv_u_, u, order, bu);
  polar_iga::eval_basis(kv_v_, v, order, bv);
  Homogeneous h;
  for (int a = 0; a < bu.count; ++a) {
    const double g = greville_u_[bu.first_index + a];
    h.su += g * bu.value(0, a);
    if (with_derivatives) h.dsu += g * bu.value(1, a);
  }
  for (int b = 0; b < bv.count; ++b) {
    const int i2 = bv.first_index + b;
    h.gx += boundary_x_[i2] * bv.value(0, b);
    h.gy += boundary_y_[i2] * bv.value(0, b);
    h.w += col_weights_[i2] * bv.value(0, b);
    if (with_derivatives) {
      h.dgx += boundary_x_[i2] * bv.value(1, b);
      h.dgy += boundary_y_[i2] * bv.value(1, b);
      h.dw += col_weights_[i2] * bv.value(1, b);
    }
  }
  return h;
}

Point2 PolarSplineSpace::map_point(double u, double v) const {
  const Homogeneous h = homogeneous(u, v, false);
  return {h.su * h.gx / h.w, h.su * h.gy / h.w};
}

GeometryJacobian PolarSplineSpace::jacobian(double u, double v) const {
  const Homogeneous h = homogeneous(u, v, true);
  const double fx = h.gx / h.w, fy = h.gy / h.w;
  const double dfx = (h.dgx - fx * h.dw) / h.w, dfy = (h.dgy - fy * h.dw) / h.w;
  GeometryJacobian jac;
  jac.dx_du = h.dsu * fx;
  jac.dy_du = h.dsu * fy;
  jac.dx_dv = h.su * dfx;
  jac.dy_dv = h.su * dfy;
  jac.det = jac.dx_du * jac.dy_dv - jac.dx_dv * jac.dy_du;
  return jac;
}

double PolarSplineSpace::weight_value(double v) const {
  BasisEvaluation bv;
  polar_iga::eval_basis(kv_v_, v, 0, bv);
  double w = 0.0;
  for (int b = 0; b < bv.count; ++b) w += col_weights_[bv.first_index + b] * bv.value(0, b);
  return w;
}

void PolarSplineSpace::eval_basis(double u, double v, int max_derivative,
                                  std::vector<BasisEntry>& out) const {
  if (max_derivative < 0 || max_derivative > 1) {
    throw std::invalid_argument("PolarSplineSpace::eval_basis: derivative order must be 0 or 1");
  }
  BasisEvaluation bu, bv;
  polar_iga::eval_basis(kv_u_, u, max_derivative, bu);
  polar_iga::eval_basis(kv_v_, v, max_derivative, bv);
  double w = 0.0, dw = 0.0;
  for (int b = 0; b < bv.count; ++b) {
    const int i2 = bv.first_index + b;
    w += col_weights_[i2] * bv.value(0, b);
    if (max_derivative >= 1) dw += col_weights_[i2] * bv.value(1, b);
  }

  out.clear();
  const bool polar_active = (bu.first_index == 0);
  if (polar_active) out.push_back({polar_dof(), 0.0, 0.0, 0.0});
  for (int a = 0; a < bu.count; ++a) {
    const int i1 = bu.first_index + a;
    for (int b = 0; b < bv.count; ++b) {
      const int i2 = bv.first_index + b;
      const double wi = col_weights_[i2];
      BasisEntry entry;
      entry.dof = global_dof(i1, i2);
      entry.value = wi * bu.value(0, a) * bv.value(0, b) / w;
      if (max_derivative >= 1) {
        entry.du = wi * bu.value(1, a) * bv.value(0, b) / w;
        entry.dv = wi * bu.value(0, a) * (bv.value(1, b) - bv.value(0, b) * dw / w) / w;
      }
      if (i1 == 0) {
        out[0].value += entry.value;
        out[0].du += entry.du;
        out[0].dv += entry.dv;
      } else {
        out.push_back(entry);
      }
    }
  }
}

std::vector<PolarSplineSpace::BasisEntry> PolarSplineSpace::eval_basis(double u, double v,
                                                                       int max_derivative) const {
  std::vector<BasisEntry> out;
  eval_basis(u, v, max_derivative, out);
  return out;
}

PolarSplineSpace::FieldValue PolarSplineSpace::evaluate(const std::vector<double>& coefficients,
                                                        double u, double v,
                                                        int max_derivative) const {
  if (static_cast<int>(coefficients.size()) != n_dofs()) {
    throw std::invalid_argument("PolarSplineSpace::evaluate: coefficient size mismatch");
  }
  std::vector<BasisEntry> entries;
  eval_basis(u, v, max_derivative, entries);
  FieldValue out;
  for (const BasisEntry& e : entries) {
    const double c = coefficients[e.dof];
    out.value += c * e.value;
    out.du += c * e.du;
    out.dv += c * e.dv;
  }
  return out;
}

Point2 PolarSplineSpace::parametric_preimage(Point2 x) const {
  const double r = norm(x);
  if (r < 1e-14) return {0.0, 0.0};
  double target = std::atan2(x.y, x.x);
  if (target < -1e-12) target += 2.0 * M_PI;
  target = std::min(target, patch_.corner_angle);

  auto boundary_angle = [this](double v) {
    const Point2 b = map_point(1.0, v);
    double a = std::atan2(b.y, b.x);
    if (a < -1e-12) a += 2.0 * M_PI;
    return a;
  };
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 50; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (boundary_angle(mid) < target) ? lo = mid : hi = mid;
  }
  double v = 0.5 * (lo + hi);
  double u = std::clamp(r / norm(map_point(1.0, v)), 0.0, 1.0);

  // Newton polish on F(u, v) = x.
  for (int iter = 0; iter < 8; ++iter) {
    const Point2 f = map_point(u, v);
    const double rx = f.x - x.x, ry = f.y - x.y;
    if (std::abs(rx) + std::abs(ry) < 1e-14) break;
    const GeometryJacobian jac = jacobian(u, v);
    if (!(std::abs(jac.det) > 1e-300)) break;
    const double inv_det = 1.0 / jac.det;
    u = std::clamp(u - (jac.dy_dv * rx - jac.dx_dv * ry) * inv_det, 0.0, 1.0);
    v = std::clamp(v - (-jac.dy_du * rx + jac.dx_du * ry) * inv_det, 0.0, 1.0);
  }
  if (norm(map_point(u, v) - x) > 1e-8) {
    throw std::invalid_argument("parametric_preimage: point outside the domain");
  }
  return {u, v};
}

std::vector<int> PolarSplineSpace::dirichlet_dofs(const std::vector<Edge>& edges) const {
  if (edges.empty()) throw std::invalid_argument("dirichlet_dofs: the Dirichlet boundary must be non-empty");
  std::set<int> dofs;
  for (Edge edge : edges) {
    switch (edge) {
      case Edge::outer:
        for (int i2 = 0; i2 < num_v(); ++i2) dofs.insert(global_dof(num_u() - 1, i2));
        break;
      case Edge::angle_min:
        for (int i1 = 0; i1 < num_u(); ++i1) dofs.insert(global_dof(i1, 0));
        break;
      case Edge::angle_max:
        for (int i1 = 0; i1 < num_u(); ++i1) dofs.insert(global_dof(i1, num_v() - 1));
        break;
    }
  }
  return {dofs.begin(), dofs.end()};
}

std::vector<double> PolarSplineSpace::project(const std::function<double(Point2)>& v) const {
  std::vector<double> coeff(n_dofs(), 0.0);
  coeff[polar_dof()] = v(patch_.polar_point);

  const int n1 = num_u(), n2 = num_v();
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (int i1 = 1; i1 < n1; ++i1) {
    const DualBasis::Functional& fu = dual_u_.functional(i1);
    for (int i2 = 0; i2 < n2; ++i2) {
      const DualBasis::Functional& fv = dual_v_.functional(i2);
      double sum = 0.0;
      for (size_t qa = 0; qa < fu.nodes.size(); ++qa) {
        double inner = 0.0;
        for (size_t qb = 0; qb < fv.nodes.size(); ++qb) {
          const double vv = fv.nodes[qb];
          inner += fv.weights[qb] * weight_value(vv) * v(map_point(fu.nodes[qa], vv));
        }
        sum += fu.weights[qa] * inner;
      }
      coeff[global_dof(i1, i2)] = sum / col_weights_[i2];
    }
  }
  return coeff;
}

}  // namespace polar_iga
