#include "polar_iga/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <stdexcept>

#include "polar_iga/parallel.hpp"
#include "polar_iga/quadrature.hpp"

namespace polar_iga {

PolarCoords to_polar(Point2 p, double omega) {
  PolarCoords out;
  out.r = std::hypot(p.x, p.y);
  double phi = std::atan2(p.y, p.x);
  if (phi < 0.0) phi += 2.0 * M_PI;
  // Rounding can push a point just past either boundary ray; fold it back.
  if (phi > omega) {
    phi = (phi - omega > 2.0 * M_PI - phi) ? 0.0 : omega;
  }
  out.phi = phi;
  return out;
}

PolarPatch ManufacturedProblem::make_patch() const {
  if (name == "pacman") return make_circular_sector(omega, default_sector_segments(omega));
  if (name == "lshape") return make_l_shape();
  throw std::invalid_argument("ManufacturedProblem: unknown geometry tag " + name);
}

double ManufacturedProblem::exact_at(Point2 p) const {
  const PolarCoords c = to_polar(p, omega);
  return exact_u(c.r, c.phi);
}

std::array<double, 2> ManufacturedProblem::gradient_at(Point2 p) const {
  const PolarCoords c = to_polar(p, omega);
  const std::array<double, 2> g = exact_gradient(c.r, c.phi);  // (u_r, u_phi / r)
  const double cs = std::cos(c.phi), sn = std::sin(c.phi);
  return {g[0] * cs - g[1] * sn, g[0] * sn + g[1] * cs};
}

double ManufacturedProblem::rhs_at(Point2 p) const {
  const PolarCoords c = to_polar(p, omega);
  return rhs(c.r, c.phi);
}

ManufacturedProblem pacman_problem() {
  ManufacturedProblem problem;
  problem.name = "pacman";
  problem.omega = 5.0 * M_PI / 3.0;
  problem.nu = M_PI / problem.omega;  // = 3/5: Neumann on both corner edges
  const double nu = problem.nu;
  problem.exact_u = [nu](double r, double phi) { return std::pow(r, nu) * std::cos(nu * phi) * (1.0 - r); };
  problem.exact_gradient = [nu](double r, double phi) -> std::array<double, 2> {
    const double rp = std::pow(r, nu - 1.0);
    return {rp * std::cos(nu * phi) * (nu * (1.0 - r) - r), -nu * rp * std::sin(nu * phi) * (1.0 - r)};
  };
  problem.rhs = [nu](double r, double phi) {
    return -std::pow(r, nu - 1.0) * std::cos(nu * phi) * (-2.0 * nu - 1.0);
  };
  problem.dirichlet_edges = {Edge::outer};
  problem.neumann_edges = {Edge::angle_min, Edge::angle_max};
  return problem;
}

ManufacturedProblem lshape_problem() {
  ManufacturedProblem problem;
  problem.name = "lshape";
  problem.omega = 1.5 * M_PI;
  problem.nu = M_PI / (2.0 * problem.omega);  // = 1/3: mixed conditions at the corner
  const double nu = problem.nu;
  // (1-x)(1+x)(1-y)(1+y) = 1 - r^2 + r^4 cos^2 sin^2 makes u vanish on the
  // outer boundary.
  auto bubble = [](double r, double phi) {
    const double cs = std::cos(phi), sn = std::sin(phi);
    return 1.0 - r * r + std::pow(r, 4) * cs * cs * sn * sn;
  };
  problem.exact_u = [nu, bubble](double r, double phi) {
    return std::pow(r, nu) * std::sin(nu * phi) * bubble(r, phi);
  };
  problem.exact_gradient = [nu, bubble](double r, double phi) -> std::array<double, 2> {
    const double cs = std::cos(phi), sn = std::sin(phi);
    const double b = bubble(r, phi);
    const double db_dr = -2.0 * r + 4.0 * std::pow(r, 3) * cs * cs * sn * sn;
    const double db_dphi = 0.5 * std::pow(r, 4) * std::sin(4.0 * phi);
    const double u_r = std::pow(r, nu - 1.0) * std::sin(nu * phi) * (nu * b) + std::pow(r, nu) * std::sin(nu * phi) * db_dr;
    const double u_t = nu * std::pow(r, nu - 1.0) * std::cos(nu * phi) * b +
                       std::pow(r, nu - 1.0) * std::sin(nu * phi) * db_dphi;
    return {u_r, u_t};
  };
  problem.rhs = [nu](double r, double phi) {
    return std::pow(r, nu) * ((4.0 + 4.0 * nu - 2.0 * r * r - nu * r * r) * std::sin(nu * phi) +
                              nu * r * r * std::sin(phi * (nu - 4.0)));
  };
  problem.dirichlet_edges = {Edge::outer, Edge::angle_min};
  problem.neumann_edges = {Edge::angle_max};
  return problem;
}

double grading_parameter(double nu, int p) {
  if (!(nu > 0.0) || p < 1) throw std::invalid_argument("grading_parameter: need nu > 0 and p >= 1");
  return std::min(0.9 * nu / p, 1.0);
}

namespace {

ErrorNorms error_norms_impl(const DiscreteSolution& solution, const ManufacturedProblem& problem,
                            const QuadratureRule& quad, bool parallel) {
  const PolarSplineSpace& space = *solution.space;
  const int q = quad.nodes_per_direction;
  const KnotVector& ku = space.kv_u();
  const KnotVector& kv = space.kv_v();
  const int eu_count = ku.num_elements();
  const int ev_count = kv.num_elements();
  const int n_elements = eu_count * ev_count;

  std::vector<double> l2_parts(n_elements, 0.0), h1_parts(n_elements, 0.0);

#pragma omp parallel for schedule(static) num_threads(max_threads()) if (parallel)
  for (int e = 0; e < n_elements; ++e) {
    const int eu = e / ev_count, ev = e % ev_count;
    const GaussRule ru = gauss_legendre_on(q, ku.breakpoints[eu], ku.breakpoints[eu + 1]);
    const GaussRule rv = gauss_legendre_on(q, kv.breakpoints[ev], kv.breakpoints[ev + 1]);
    double l2 = 0.0, h1 = 0.0;
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        const double u = ru.nodes[a], v = rv.nodes[b];
        const PolarSplineSpace::FieldValue fh = space.evaluate(solution.coefficients, u, v, 1);
        const GeometryJacobian jac = space.jacobian(u, v);
        const double inv_det = 1.0 / jac.det;
        const double gx = (jac.dy_dv * fh.du - jac.dy_du * fh.dv) * inv_det;
        const double gy = (-jac.dx_dv * fh.du + jac.dx_du * fh.dv) * inv_det;
        const Point2 x = space.map_point(u, v);
        const double du = fh.value - problem.exact_at(x);
        const std::array<double, 2> ge = problem.gradient_at(x);
        const double dgx = gx - ge[0], dgy = gy - ge[1];
        const double scale = ru.weights[a] * rv.weights[b] * jac.det;
        l2 += scale * du * du;
        h1 += scale * (dgx * dgx + dgy * dgy);
      }
    }
    l2_parts[e] = l2;
    h1_parts[e] = h1;
  }

  ErrorNorms norms;
  double l2 = 0.0, h1 = 0.0;
  for (int e = 0; e < n_elements; ++e) {
    l2 += l2_parts[e];
    h1 += h1_parts[e];
  }
  norms.l2 = std::sqrt(l2);
  norms.h1_semi = std::sqrt(h1);
  norms.h1 = std::sqrt(l2 + h1);
  return norms;
}

}  // namespace

ErrorNorms error_norms(const DiscreteSolution& solution, const ManufacturedProblem& problem,
                       const QuadratureRule& quad) {
  return error_norms_impl(solution, problem, quad, true);
}

ErrorNorms error_norms_reference(const DiscreteSolution& solution,
                                 const ManufacturedProblem& problem, const QuadratureRule& quad) {
  return error_norms_impl(solution, problem, quad, false);
}

double resolve_grading(const ManufacturedProblem& problem, int p, GradingMode mode,
                       double explicit_mu) {
  switch (mode) {
    case GradingMode::uniform:
      return 1.0;
    case GradingMode::automatic:
      return grading_parameter(problem.nu, p);
    case GradingMode::explicit_value:
      if (!(explicit_mu > 0.0) || explicit_mu > 1.0) {
        throw std::invalid_argument("resolve_grading: explicit mu must lie in (0, 1]");
      }
      return explicit_mu;
  }
  throw std::logic_error("resolve_grading: unreachable");
}

LevelResult solve_level(const ManufacturedProblem& problem, int degree_u, int degree_v,
                        int breakpoints, double mu, int quad_nodes) {
  const PolarPatch patch = problem.make_patch();
  auto space = std::make_shared<PolarSplineSpace>(patch, degree_u, degree_v, breakpoints,
                                                  breakpoints, mu);
  const QuadratureRule quad{quad_nodes};
  auto f = [&problem](Point2 x) { return problem.rhs_at(x); };
  LinearSystem system = assemble(*space, f, quad);
  const std::vector<int> constrained = space->dirichlet_dofs(problem.dirichlet_edges);
  LinearSystem reduced = apply_dirichlet(system, constrained);

  LevelResult result;
  result.h = space->refinement_parameter();
  result.n_dofs = space->n_dofs();
  result.solution = solve(reduced, space);
  result.errors = error_norms(result.solution, problem, quad);
  return result;
}

ConvergenceReport convergence_study(const ManufacturedProblem& problem, int p, GradingMode mode,
                                    double explicit_mu, const std::vector<int>& levels,
                                    const StudyOptions& options) {
  if (levels.empty()) throw std::invalid_argument("convergence_study: levels must be nonempty");
  for (size_t i = 0; i + 1 < levels.size(); ++i) {
    if (levels[i] >= levels[i + 1]) throw std::invalid_argument("convergence_study: levels must increase");
  }
  if (p < 1) throw std::invalid_argument("convergence_study: degree must be >= 1");

  ConvergenceReport report;
  report.problem = problem.name;
  report.degree_u = p;
  report.degree_v = std::max(p, problem.make_patch().kv_v.degree);
  report.mu = resolve_grading(problem, p, mode, explicit_mu);
  report.quad_nodes = options.quad_nodes;

  for (int N : levels) {
    const LevelResult level =
        solve_level(problem, report.degree_u, report.degree_v, N, report.mu, options.quad_nodes);
    ConvergenceRow row;
    row.level = N;
    row.h = level.h;
    row.n_dofs = level.n_dofs;
    row.err_l2 = level.errors.l2;
    row.err_h1 = level.errors.h1;
    if (!report.rows.empty()) {
      const ConvergenceRow& prev = report.rows.back();
      const double dh = std::log(prev.h / row.h);
      row.rate_l2 = std::log(prev.err_l2 / row.err_l2) / dh;
      row.rate_h1 = std::log(prev.err_h1 / row.err_h1) / dh;
    }
    report.rows.push_back(row);
  }
  report.slope_l2 = least_squares_slope(report.rows, &ConvergenceRow::err_l2, 3);
  report.slope_h1 = least_squares_slope(report.rows, &ConvergenceRow::err_h1, 3);
  return report;
}

double least_squares_slope(const std::vector<ConvergenceRow>& rows,
                           double ConvergenceRow::* err, int window) {
  const int n = static_cast<int>(rows.size());
  const int k = std::min(window, n);
  if (k < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = n - k; i < n; ++i) {
    const double x = std::log(rows[i].h);
    const double y = std::log(rows[i].*err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

void write_report_csv(const ConvergenceReport& report, std::ostream& os) {
  char line[320];
  std::snprintf(line, sizeof(line), "# problem=%s degree=(%d,%d) mu=%.17g quadrature=%d\n",
                report.problem.c_str(), report.degree_u, report.degree_v, report.mu,
                report.quad_nodes);
  os << line;
  std::snprintf(line, sizeof(line), "# slope_l2=%.6f slope_h1=%.6f\n", report.slope_l2,
                report.slope_h1);
  os << line;
  os << "level,h,ndofs,err_l2,err_h1,rate_l2,rate_h1\n";
  for (const ConvergenceRow& row : report.rows) {
    std::snprintf(line, sizeof(line), "%d,%.17g,%d,%.17g,%.17g,%.6f,%.6f\n", row.level, row.h,
                  row.n_dofs, row.err_l2, row.err_h1, row.rate_l2, row.rate_h1);
    os << line;
  }
}

nlohmann::json report_to_json(const ConvergenceReport& report) {
  nlohmann::json j;
  j["problem"] = report.problem;
  j["degree"] = {report.degree_u, report.degree_v};
  j["mu"] = report.mu;
  j["quadrature_nodes"] = report.quad_nodes;
  j["slope_l2"] = report.slope_l2;
  j["slope_h1"] = report.slope_h1;
  j["rows"] = nlohmann::json::array();
  for (const ConvergenceRow& row : report.rows) {
    j["rows"].push_back({{"level", row.level},
                         {"h", row.h},
                         {"ndofs", row.n_dofs},
                         {"err_l2", row.err_l2},
                         {"err_h1", row.err_h1},
                         {"rate_l2", row.rate_l2},
                         {"rate_h1", row.rate_h1}});
  }
  return j;
}

}  // namespace polar_iga
