#include "polar_iga/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <stdexcept>

#include "polar_iga/parallel.hpp"
#include "polar_iga/quadrature.hpp"

namespace polar_iga {

namespace {

// Univariate basis data at every Gauss node of every element of one
// direction; the tensor structure makes this the whole evaluation cost.
struct DirectionTable {
  std::vector<double> nodes;    // [element * q + node]
  std::vector<double> weights;  // Gauss weights scaled to the element
  std::vector<BasisEvaluation> basis;
  int q = 0;

  void build(const KnotVector& kv, int q_in) {
    q = q_in;
    const int elements = kv.num_elements();
    nodes.resize(elements * q);
    weights.resize(elements * q);
    basis.resize(elements * q);
    for (int e = 0; e < elements; ++e) {
      const GaussRule rule = gauss_legendre_on(q, kv.breakpoints[e], kv.breakpoints[e + 1]);
      for (int g = 0; g < q; ++g) {
        nodes[e * q + g] = rule.nodes[g];
        weights[e * q + g] = rule.weights[g];
        eval_basis(kv, rule.nodes[g], 1, basis[e * q + g]);
      }
    }
  }
};

struct ElementKernel {
  const PolarSplineSpace& space;
  const std::function<double(Point2)>& f;
  const DirectionTable& tu;
  const DirectionTable& tv;
  int n_local;

  // Local stiffness (row-major n_local x n_local), local load, and the
  // global DOF of each local index.
  void operator()(int eu, int ev, std::vector<double>& ke, std::vector<double>& be,
                  std::vector<int>& dofs) const {
    const int q = tu.q;
    const int pu = space.kv_u().degree, pv = space.kv_v().degree;
    ke.assign(n_local * n_local, 0.0);
    be.assign(n_local, 0.0);
    dofs.resize(n_local);

    std::vector<double> val(n_local), gx(n_local), gy(n_local);
    for (int ga = 0; ga < q; ++ga) {
      const BasisEvaluation& bu = tu.basis[eu * q + ga];
      for (int gb = 0; gb < q; ++gb) {
        const BasisEvaluation& bv = tv.basis[ev * q + gb];

        double w = 0.0, dw = 0.0;
        for (int b = 0; b <= pv; ++b) {
          const double cw = space.column_weight(bv.first_index + b);
          w += cw * bv.value(0, b);
          dw += cw * bv.value(1, b);
        }

        const double u = tu.nodes[eu * q + ga];
        const double v = tv.nodes[ev * q + gb];
        const GeometryJacobian jac = space.jacobian(u, v);
        if (!(jac.det > 0.0)) {
          throw std::runtime_error("assemble: non-positive Jacobian determinant at a quadrature node");
        }
        const double inv_det = 1.0 / jac.det;
        const double scale = tu.weights[eu * q + ga] * tv.weights[ev * q + gb] * jac.det;
        const double fx = f(space.map_point(u, v));

        int a = 0;
        for (int iu = 0; iu <= pu; ++iu) {
          for (int iv = 0; iv <= pv; ++iv, ++a) {
            const int i1 = bu.first_index + iu;
            const int i2 = bv.first_index + iv;
            if (ga == 0 && gb == 0) dofs[a] = space.global_dof(i1, i2);
            const double cw = space.column_weight(i2);
            const double n = cw * bu.value(0, iu) * bv.value(0, iv) / w;
            const double n_du = cw * bu.value(1, iu) * bv.value(0, iv) / w;
            const double n_dv = cw * bu.value(0, iu) * (bv.value(1, iv) - bv.value(0, iv) * dw / w) / w;
            // physical gradient: J^{-T} (n_du, n_dv)
            val[a] = n;
            gx[a] = (jac.dy_dv * n_du - jac.dy_du * n_dv) * inv_det;
            gy[a] = (-jac.dx_dv * n_du + jac.dx_du * n_dv) * inv_det;
          }
        }
        for (int i = 0; i < n_local; ++i) {
          be[i] += scale * fx * val[i];
          const double gxi = gx[i], gyi = gy[i];
          for (int j = 0; j < n_local; ++j) {
            ke[i * n_local + j] += scale * (gxi * gx[j] + gyi * gy[j]);
          }
        }
      }
    }
  }
};

LinearSystem assemble_impl(const PolarSplineSpace& space, const std::function<double(Point2)>& f,
                           const QuadratureRule& quad, bool parallel) {
  if (quad.nodes_per_direction < 1) throw std::invalid_argument("assemble: quadrature order must be positive");
  DirectionTable tu, tv;
  tu.build(space.kv_u(), quad.nodes_per_direction);
  tv.build(space.kv_v(), quad.nodes_per_direction);

  const int eu_count = space.kv_u().num_elements();
  const int ev_count = space.kv_v().num_elements();
  const int n_elements = eu_count * ev_count;
  const int n_local = (space.kv_u().degree + 1) * (space.kv_v().degree + 1);
  ElementKernel kernel{space, f, tu, tv, n_local};

  // Per-element slices keep the merge order fixed regardless of threads.
  std::vector<double> all_ke(static_cast<size_t>(n_elements) * n_local * n_local);
  std::vector<double> all_be(static_cast<size_t>(n_elements) * n_local);
  std::vector<int> all_dofs(static_cast<size_t>(n_elements) * n_local);

#pragma omp parallel for schedule(static) num_threads(max_threads()) if (parallel)
  for (int e = 0; e < n_elements; ++e) {
    std::vector<double> ke, be;
    std::vector<int> dofs;
    kernel(e / ev_count, e % ev_count, ke, be, dofs);
    std::copy(ke.begin(), ke.end(), all_ke.begin() + static_cast<size_t>(e) * n_local * n_local);
    std::copy(be.begin(), be.end(), all_be.begin() + static_cast<size_t>(e) * n_local);
    std::copy(dofs.begin(), dofs.end(), all_dofs.begin() + static_cast<size_t>(e) * n_local);
  }

  LinearSystem system;
  const int n = space.n_dofs();
  system.load = Eigen::VectorXd::Zero(n);
  system.free_dofs.resize(n);
  for (int i = 0; i < n; ++i) system.free_dofs[i] = i;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(n_elements) * n_local * n_local);
  for (int e = 0; e < n_elements; ++e) {
    const int* dofs = &all_dofs[static_cast<size_t>(e) * n_local];
    const double* ke = &all_ke[static_cast<size_t>(e) * n_local * n_local];
    const double* be = &all_be[static_cast<size_t>(e) * n_local];
    for (int i = 0; i < n_local; ++i) {
      system.load[dofs[i]] += be[i];
      for (int j = 0; j < n_local; ++j) {
        triplets.emplace_back(dofs[i], dofs[j], ke[i * n_local + j]);
      }
    }
  }
  system.stiffness.resize(n, n);
  system.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  return system;
}

}  // namespace

LinearSystem assemble(const PolarSplineSpace& space, const std::function<double(Point2)>& f,
                      const QuadratureRule& quad) {
  return assemble_impl(space, f, quad, true);
}

LinearSystem assemble_reference(const PolarSplineSpace& space,
                                const std::function<double(Point2)>& f, const QuadratureRule& quad) {
  return assemble_impl(space, f, quad, false);
}

LinearSystem apply_dirichlet(const LinearSystem& system, const std::vector<int>& constrained) {
  const int n = system.size();
  if (constrained.empty()) {
    throw std::invalid_argument("apply_dirichlet: the Dirichlet boundary must be non-empty");
  }
  std::vector<char> is_constrained(n, 0);
  for (int dof : constrained) {
    if (dof < 0 || dof >= n) throw std::out_of_range("apply_dirichlet: DOF index out of range");
    is_constrained[dof] = 1;
  }
  LinearSystem reduced;
  std::vector<int> to_reduced(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!is_constrained[i]) {
      to_reduced[i] = static_cast<int>(reduced.free_dofs.size());
      reduced.free_dofs.push_back(system.free_dofs[i]);
    }
  }
  const int m = static_cast<int>(reduced.free_dofs.size());
  if (m == 0) throw std::invalid_argument("apply_dirichlet: cannot constrain every DOF");

  reduced.load = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < n; ++i) {
    if (to_reduced[i] >= 0) reduced.load[to_reduced[i]] = system.load[i];
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(system.stiffness.nonZeros());
  for (int k = 0; k < system.stiffness.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.stiffness, k); it; ++it) {
      const int r = to_reduced[it.row()];
      const int c = to_reduced[it.col()];
      if (r >= 0 && c >= 0) triplets.emplace_back(r, c, it.value());
    }
  }
  reduced.stiffness.resize(m, m);
  reduced.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  return reduced;
}

DiscreteSolution solve(const LinearSystem& system, std::shared_ptr<const PolarSplineSpace> space,
                       SolveReport* report) {
  const int m = system.size();
  const double b_norm = system.load.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  SolveReport info;

  if (b_norm > 0.0) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(system.stiffness);
    bool direct_ok = (ldlt.info() == Eigen::Success);
    if (direct_ok) {
      x = ldlt.solve(system.load);
      // A couple of refinement steps push the residual to roundoff even on
      // strongly graded (ill-conditioned) meshes.
      for (int step = 0; step < 3; ++step) {
        const Eigen::VectorXd r = system.load - system.stiffness * x;
        info.relative_residual = r.norm() / b_norm;
        if (info.relative_residual < 1e-13) break;
        x += ldlt.solve(r);
        ++info.refinement_steps;
      }
      info.relative_residual = (system.load - system.stiffness * x).norm() / b_norm;
    }
    if (!direct_ok || !(info.relative_residual < 1e-12)) {
      info.used_cg = true;
      Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                               Eigen::DiagonalPreconditioner<double>>
          cg(system.stiffness);
      cg.setTolerance(1e-13);
      cg.setMaxIterations(50000);
      x = (direct_ok && x.allFinite()) ? cg.solveWithGuess(system.load, x).eval()
                                       : cg.solve(system.load).eval();
      info.cg_iterations = static_cast<int>(cg.iterations());
      info.relative_residual = (system.load - system.stiffness * x).norm() / b_norm;
      if (!(info.relative_residual < 1e-12)) {
        const Eigen::VectorXd diag = system.stiffness.diagonal();
        const double cond_proxy = diag.maxCoeff() / std::max(diag.minCoeff(), 1e-300);
        throw std::runtime_error("solve: residual " + std::to_string(info.relative_residual) +
                                 " above tolerance (diagonal condition estimate " +
                                 std::to_string(cond_proxy) + ")");
      }
    }
  }

  DiscreteSolution solution;
  solution.space = std::move(space);
  solution.coefficients.assign(solution.space ? solution.space->n_dofs() : m, 0.0);
  for (int i = 0; i < m; ++i) solution.coefficients[system.free_dofs[i]] = x[i];
  if (report) *report = info;
  return solution;
}

PointValue evaluate(const DiscreteSolution& solution, double u, double v, bool with_gradient) {
  const PolarSplineSpace& space = *solution.space;
  PointValue out;
  const PolarSplineSpace::FieldValue f =
      space.evaluate(solution.coefficients, u, v, with_gradient ? 1 : 0);
  out.value = f.value;
  if (with_gradient) {
    if (u <= 0.0) {
      throw std::invalid_argument("evaluate: the gradient is undefined on the collapsed edge");
    }
    const GeometryJacobian jac = space.jacobian(u, v);
    const double inv_det = 1.0 / jac.det;
    out.grad_x = (jac.dy_dv * f.du - jac.dy_du * f.dv) * inv_det;
    out.grad_y = (-jac.dx_dv * f.du + jac.dx_du * f.dv) * inv_det;
  }
  return out;
}

PointValue evaluate_at(const DiscreteSolution& solution, Point2 x, bool with_gradient) {
  const Point2 zeta = solution.space->parametric_preimage(x);
  return evaluate(solution, zeta.x, zeta.y, with_gradient);
}

}  // namespace polar_iga
