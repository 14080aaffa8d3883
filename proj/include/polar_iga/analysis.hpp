#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "polar_iga/solver.hpp"

namespace polar_iga {

struct PolarCoords {
  double r = 0.0;
  double phi = 0.0;
};

/// Polar coordinates of a physical point with the branch normalized to
/// [0, omega]; small excursions from rounding are clamped back onto the
/// boundary rays.
PolarCoords to_polar(Point2 p, double omega);

/// Poisson benchmark with a known singular solution. exact_u, rhs and the
/// gradient are given in polar form (r, phi) with phi in [0, omega]; the
/// gradient components are (d/dr u, (1/r) d/dphi u).
struct ManufacturedProblem {
  std::string name;
  double omega = 0.0;
  double nu = 0.0;  // leading corner-singularity exponent of r^nu
  std::function<double(double, double)> exact_u;
  std::function<std::array<double, 2>(double, double)> exact_gradient;
  std::function<double(double, double)> rhs;
  std::vector<Edge> dirichlet_edges;
  std::vector<Edge> neumann_edges;

  /// Weighted-regularity metadata: u lies in V^s_beta for every s up to
  /// regularity_limit and beta in (beta_lower(s), beta_upper(s)).
  double regularity_limit = std::numeric_limits<double>::infinity();
  double beta_lower(int s) const { return s - 1.0 - nu; }
  double beta_upper(int s) const { return s - 1.0; }

  PolarPatch make_patch() const;

  double exact_at(Point2 p) const;
  /// Cartesian gradient of the exact solution.
  std::array<double, 2> gradient_at(Point2 p) const;
  double rhs_at(Point2 p) const;
};

/// Circular sector of angle 5*pi/3, Dirichlet on the arc, Neumann on both
/// straight edges; u = r^nu cos(nu phi) (1 - r) with nu = 3/5.
ManufacturedProblem pacman_problem();

/// L-shape with mixed conditions at the corner (Neumann on the edge toward
/// (0,-1), Dirichlet elsewhere); u = r^nu sin(nu phi)(1-x^2)(1-y^2) in polar
/// form, nu = 1/3.
ManufacturedProblem lshape_problem();

/// Grading rule mu = min{0.9 nu / p, 1}.
double grading_parameter(double nu, int p);

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;
};

/// Element-wise quadrature of |u - u_h|^2 and |grad u - grad u_h|^2 pulled
/// back to the parametric mesh. OpenMP element loop with an order-fixed
/// reduction; the serial reference is kept for testing.
ErrorNorms error_norms(const DiscreteSolution& solution, const ManufacturedProblem& problem,
                       const QuadratureRule& quad);
ErrorNorms error_norms_reference(const DiscreteSolution& solution,
                                 const ManufacturedProblem& problem, const QuadratureRule& quad);

enum class GradingMode { uniform, automatic, explicit_value };

struct ConvergenceRow {
  int level = 0;  // breakpoints per direction (N)
  double h = 0.0;
  int n_dofs = 0;
  double err_l2 = 0.0;
  double err_h1 = 0.0;
  double rate_l2 = 0.0;  // log(e_prev/e_cur) / log(h_prev/h_cur); 0 on the first row
  double rate_h1 = 0.0;
};

struct ConvergenceReport {
  std::string problem;
  int degree_u = 0;
  int degree_v = 0;
  double mu = 1.0;
  int quad_nodes = 6;
  std::vector<ConvergenceRow> rows;
  double slope_l2 = 0.0;  // least-squares slope over the final three levels
  double slope_h1 = 0.0;
};

struct StudyOptions {
  int quad_nodes = 6;
};

/// Solves the problem on every level and reports errors, pairwise rates and
/// the least-squares slopes. The spaces use degrees (p, max(p, geometry
/// degree)) and maximal smoothness away from the geometry junctions;
/// grading applies to the radial direction only, so uniform and graded runs
/// share their DOF count.
ConvergenceReport convergence_study(const ManufacturedProblem& problem, int p, GradingMode mode,
                                    double explicit_mu, const std::vector<int>& levels,
                                    const StudyOptions& options = {});

/// Resolved grading value for a study configuration.
double resolve_grading(const ManufacturedProblem& problem, int p, GradingMode mode,
                       double explicit_mu);

/// Least-squares slope of log(err) against log(h) over the last `window`
/// rows (or all rows when fewer).
double least_squares_slope(const std::vector<ConvergenceRow>& rows,
                           double ConvergenceRow::* err, int window);

/// CSV schema: level,h,ndofs,err_l2,err_h1,rate_l2,rate_h1 with the resolved
/// configuration echoed in '#' comment lines.
void write_report_csv(const ConvergenceReport& report, std::ostream& os);
nlohmann::json report_to_json(const ConvergenceReport& report);

/// One full solve of a problem; the building block of a study level.
struct LevelResult {
  DiscreteSolution solution;
  ErrorNorms errors;
  double h = 0.0;
  int n_dofs = 0;
};
LevelResult solve_level(const ManufacturedProblem& problem, int degree_u, int degree_v,
                        int breakpoints, double mu, int quad_nodes);

}  // namespace polar_iga
