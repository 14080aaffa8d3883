#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "polar_iga/analysis.hpp"
#include "polar_iga/quadrature.hpp"
#include "polar_iga/solver.hpp"

using namespace polar_iga;

namespace {

std::shared_ptr<PolarSplineSpace> small_pacman_space() {
  return std::make_shared<PolarSplineSpace>(make_circular_sector(5.0 * M_PI / 3.0, 3), 2, 2, 5, 5, 0.4);
}

double sparse_max_abs_diff(const Eigen::SparseMatrix<double>& a, const Eigen::SparseMatrix<double>& b) {
  const Eigen::SparseMatrix<double> d = a - b;
  double worst = 0.0;
  for (int k = 0; k < d.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(d, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("zero right-hand side gives a zero load vector") {
  auto space = small_pacman_space();
  const LinearSystem system = assemble(*space, [](Point2) { return 0.0; }, QuadratureRule{6});
  CHECK(system.load.norm() == 0.0);
}

TEST_CASE("constants lie in the stiffness kernel") {
  auto space = small_pacman_space();
  const LinearSystem system = assemble(*space, [](Point2) { return 0.0; }, QuadratureRule{6});
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(space->n_dofs());
  const double scale = system.stiffness.coeffs().abs().maxCoeff();
  CHECK((system.stiffness * ones).cwiseAbs().maxCoeff() < 1e-10 * scale);
}

TEST_CASE("stiffness matrix is symmetric") {
  auto space = small_pacman_space();
  const LinearSystem system = assemble(*space, [](Point2 x) { return x.x; }, QuadratureRule{6});
  const double scale = system.stiffness.coeffs().abs().maxCoeff();
  CHECK(sparse_max_abs_diff(system.stiffness,
                            Eigen::SparseMatrix<double>(system.stiffness.transpose())) <
        1e-12 * scale);
}

TEST_CASE("parallel assembly equals the serial reference") {
  auto space = small_pacman_space();
  auto f = [](Point2 x) { return std::sin(3.0 * x.x) + x.y; };
  const LinearSystem a = assemble(*space, f, QuadratureRule{4});
  const LinearSystem b = assemble_reference(*space, f, QuadratureRule{4});
  CHECK(sparse_max_abs_diff(a.stiffness, b.stiffness) == 0.0);
  CHECK((a.load - b.load).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Dirichlet elimination") {
  auto space = small_pacman_space();
  const LinearSystem system = assemble(*space, [](Point2) { return 1.0; }, QuadratureRule{6});

  const std::vector<int> pacman = space->dirichlet_dofs({Edge::outer});
  const LinearSystem reduced = apply_dirichlet(system, pacman);
  CHECK(reduced.size() == space->n_dofs() - static_cast<int>(pacman.size()));

  const std::vector<int> lshape = space->dirichlet_dofs({Edge::outer, Edge::angle_min});
  const LinearSystem reduced_l = apply_dirichlet(system, lshape);
  for (int dof : reduced_l.free_dofs) CHECK(dof != space->polar_dof());

  CHECK_THROWS_AS(apply_dirichlet(system, {}), std::invalid_argument);
  std::vector<int> everything(space->n_dofs());
  for (int i = 0; i < space->n_dofs(); ++i) everything[i] = i;
  CHECK_THROWS_AS(apply_dirichlet(system, everything), std::invalid_argument);
}

TEST_CASE("solve a 1x1 system") {
  LinearSystem system;
  system.stiffness.resize(1, 1);
  system.stiffness.insert(0, 0) = 2.0;
  system.load = Eigen::VectorXd::Constant(1, 4.0);
  system.free_dofs = {0};
  const DiscreteSolution solution = solve(system, nullptr);
  CHECK(solution.coefficients[0] == doctest::Approx(2.0));
}

TEST_CASE("solve a random SPD system to tight residual") {
  std::mt19937 rng(41);
  std::normal_distribution<double> dist;
  const int n = 50;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
  }
  const Eigen::MatrixXd k = a.transpose() * a + Eigen::MatrixXd::Identity(n, n);
  LinearSystem system;
  system.stiffness = k.sparseView();
  system.load = Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) { return dist(rng); });
  system.free_dofs.resize(n);
  for (int i = 0; i < n; ++i) system.free_dofs[i] = i;

  SolveReport report;
  const DiscreteSolution solution = solve(system, nullptr, &report);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = solution.coefficients[i];
  CHECK((system.stiffness * x - system.load).norm() / system.load.norm() < 1e-12);
  CHECK(report.relative_residual < 1e-12);
}

TEST_CASE("solve rejects a singular system") {
  LinearSystem system;
  system.stiffness.resize(2, 2);
  system.stiffness.insert(0, 0) = 1.0;  // second row identically zero
  system.load = Eigen::VectorXd::Ones(2);
  system.free_dofs = {0, 1};
  CHECK_THROWS_AS(solve(system, nullptr), std::runtime_error);
}

TEST_CASE("full pipeline solution is finite at the polar point") {
  const ManufacturedProblem problem = pacman_problem();
  const LevelResult level = solve_level(problem, 2, 2, 9, grading_parameter(problem.nu, 2), 6);
  const PointValue at_p = evaluate(level.solution, 0.0, 0.5, false);
  CHECK(std::isfinite(at_p.value));
  // exact u(P) = 0; the discrete value approaches it
  CHECK(std::abs(at_p.value) < 0.05);
}

TEST_CASE("evaluate constants and the collapsed DOF") {
  auto space = small_pacman_space();
  DiscreteSolution ones{space, std::vector<double>(space->n_dofs(), 1.0)};
  for (double u : {0.2, 0.7}) {
    for (double v : {0.1, 0.8}) {
      const PointValue pv = evaluate(ones, u, v, true);
      CHECK(pv.value == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(pv.grad_x) < 1e-10);
      CHECK(std::abs(pv.grad_y) < 1e-10);
    }
  }

  DiscreteSolution polar_only{space, std::vector<double>(space->n_dofs(), 0.0)};
  polar_only.coefficients[space->polar_dof()] = 1.0;
  CHECK(evaluate(polar_only, 0.0, 0.3, false).value == doctest::Approx(1.0));

  CHECK_THROWS_AS(evaluate(ones, 0.0, 0.5, true), std::invalid_argument);
}

TEST_CASE("evaluate at a physical point") {
  auto space = small_pacman_space();
  std::mt19937 rng(67);
  std::uniform_real_distribution<double> coeff_dist(-1.0, 1.0);
  std::uniform_real_distribution<double> param_dist(0.05, 0.95);
  DiscreteSolution field{space, std::vector<double>(space->n_dofs())};
  for (double& c : field.coefficients) c = coeff_dist(rng);
  for (int trial = 0; trial < 30; ++trial) {
    const double u = param_dist(rng), v = param_dist(rng);
    const Point2 x = space->map_point(u, v);
    const PointValue direct = evaluate(field, u, v, true);
    const PointValue located = evaluate_at(field, x, true);
    CHECK(located.value == doctest::Approx(direct.value).epsilon(1e-10));
    CHECK(located.grad_x == doctest::Approx(direct.grad_x).epsilon(1e-8));
    CHECK(located.grad_y == doctest::Approx(direct.grad_y).epsilon(1e-8));
  }
  // the polar point itself
  const PointValue at_corner = evaluate_at(field, {0.0, 0.0}, false);
  CHECK(at_corner.value == doctest::Approx(field.coefficients[space->polar_dof()]));
  // points outside the sector are rejected
  CHECK_THROWS_AS(evaluate_at(field, {2.0, 2.0}, false), std::invalid_argument);
}

TEST_CASE("gradient matches finite differences of the value") {
  auto space = small_pacman_space();
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> coeff_dist(-1.0, 1.0);
  std::uniform_real_distribution<double> point_dist(0.15, 0.85);
  DiscreteSolution field{space, std::vector<double>(space->n_dofs())};
  for (double& c : field.coefficients) c = coeff_dist(rng);

  const double step = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const double u = point_dist(rng), v = point_dist(rng);
    const PointValue pv = evaluate(field, u, v, true);
    // central differences in physical coordinates via small parametric moves
    const GeometryJacobian jac = space->jacobian(u, v);
    const double inv_det = 1.0 / jac.det;
    auto value_at_physical_offset = [&](double dx, double dy) {
      // pull the physical offset back with the inverse Jacobian
      const double du = (jac.dy_dv * dx - jac.dx_dv * dy) * inv_det;
      const double dv = (-jac.dy_du * dx + jac.dx_du * dy) * inv_det;
      return evaluate(field, u + du, v + dv, false).value;
    };
    const double fx = (value_at_physical_offset(step, 0.0) - value_at_physical_offset(-step, 0.0)) / (2.0 * step);
    const double fy = (value_at_physical_offset(0.0, step) - value_at_physical_offset(0.0, -step)) / (2.0 * step);
    CHECK(std::abs(fx - pv.grad_x) < 2e-5 * std::max(1.0, std::abs(pv.grad_x)));
    CHECK(std::abs(fy - pv.grad_y) < 2e-5 * std::max(1.0, std::abs(pv.grad_y)));
  }
}

TEST_CASE("Galerkin orthogonality and energy identity") {
  const ManufacturedProblem problem = pacman_problem();
  const PolarPatch patch = problem.make_patch();
  auto space = std::make_shared<PolarSplineSpace>(patch, 2, 2, 7, 7, 1.0);
  const QuadratureRule quad{6};
  auto f = [&problem](Point2 x) { return problem.rhs_at(x); };
  const LinearSystem system = assemble(*space, f, quad);
  const LinearSystem reduced = apply_dirichlet(system, space->dirichlet_dofs(problem.dirichlet_edges));
  const DiscreteSolution uh = solve(reduced, space);

  // recompute a(u_h, v) - b(v) by fresh quadrature for random test members
  std::mt19937 rng(47);
  std::normal_distribution<double> dist;
  const double b_norm = reduced.load.norm();
  const KnotVector& ku = space->kv_u();
  const KnotVector& kv = space->kv_v();
  for (int trial = 0; trial < 10; ++trial) {
    DiscreteSolution vh{space, std::vector<double>(space->n_dofs(), 0.0)};
    for (int i = 0; i < reduced.size(); ++i) vh.coefficients[reduced.free_dofs[i]] = dist(rng);
    double residual = 0.0;
    double energy_lhs = 0.0, energy_rhs = 0.0;
    for (int eu = 0; eu < ku.num_elements(); ++eu) {
      for (int ev = 0; ev < kv.num_elements(); ++ev) {
        const GaussRule ru = gauss_legendre_on(6, ku.breakpoints[eu], ku.breakpoints[eu + 1]);
        const GaussRule rv = gauss_legendre_on(6, kv.breakpoints[ev], kv.breakpoints[ev + 1]);
        for (int a = 0; a < 6; ++a) {
          for (int b = 0; b < 6; ++b) {
            const double u = ru.nodes[a], v = rv.nodes[b];
            const PointValue pu = evaluate(uh, u, v, true);
            const PointValue pv = evaluate(vh, u, v, true);
            const double det = space->jacobian(u, v).det;
            const double w = ru.weights[a] * rv.weights[b] * det;
            const double fx = f(space->map_point(u, v));
            residual += w * (pu.grad_x * pv.grad_x + pu.grad_y * pv.grad_y - fx * pv.value);
            if (trial == 0) {
              energy_lhs += w * (pu.grad_x * pu.grad_x + pu.grad_y * pu.grad_y);
              energy_rhs += w * fx * pu.value;
            }
          }
        }
      }
    }
    CHECK(std::abs(residual) < 1e-10 * b_norm);
    if (trial == 0) CHECK(energy_lhs == doctest::Approx(energy_rhs).epsilon(1e-9));
  }
}

TEST_CASE("zero data yields the zero solution exactly") {
  auto space = small_pacman_space();
  const LinearSystem system = assemble(*space, [](Point2) { return 0.0; }, QuadratureRule{6});
  const LinearSystem reduced = apply_dirichlet(system, space->dirichlet_dofs({Edge::outer}));
  const DiscreteSolution solution = solve(reduced, space);
  for (double c : solution.coefficients) CHECK(c == 0.0);
}
