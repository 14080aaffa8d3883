#pragma once

#include <Eigen/Sparse>

#include <functional>
#include <memory>
#include <vector>

#include "polar_iga/polar_space.hpp"

namespace polar_iga {

/// Tensor Gauss-Legendre rule per Bezier element. Nodes are strictly inside
/// each element, so the collapsed edge zeta1 = 0 is never hit.
struct QuadratureRule {
  int nodes_per_direction = 6;
};

/// Galerkin system K u = b over the space DOFs. free_dofs maps reduced rows
/// to global DOF indices; before Dirichlet elimination it is the identity.
struct LinearSystem {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd load;
  std::vector<int> free_dofs;

  int size() const { return static_cast<int>(load.size()); }
};

/// Galerkin assembly of int grad u . grad v dx and int f v dx over the
/// physical domain, pulled back element-by-element to the parametric mesh:
/// gradients transform with the inverse-transpose Jacobian and integrals
/// carry |det J_F|. Throws when det J_F is not positive at a quadrature node.
/// OpenMP element loop; contributions are merged in element order, so the
/// result does not depend on the thread count.
LinearSystem assemble(const PolarSplineSpace& space, const std::function<double(Point2)>& f,
                      const QuadratureRule& quad);

/// Serial reference implementation of the same assembly, kept for testing.
LinearSystem assemble_reference(const PolarSplineSpace& space,
                                const std::function<double(Point2)>& f, const QuadratureRule& quad);

/// Removes rows/columns of constrained DOFs (homogeneous Dirichlet data).
/// Throws when the constrained set is empty or constrains every DOF.
LinearSystem apply_dirichlet(const LinearSystem& system, const std::vector<int>& constrained);

struct DiscreteSolution {
  std::shared_ptr<const PolarSplineSpace> space;
  std::vector<double> coefficients;  // full DOF vector, constrained entries zero
};

struct SolveReport {
  double relative_residual = 0.0;
  int refinement_steps = 0;
  bool used_cg = false;
  int cg_iterations = 0;
};

/// Direct symmetric factorization (LDLT) with iterative refinement;
/// conjugate-gradient fallback with diagonal preconditioner when the direct
/// residual stays above 1e-12. Throws on factorization/iteration failure,
/// reporting a condition estimate from the factor diagonal.
DiscreteSolution solve(const LinearSystem& system, std::shared_ptr<const PolarSplineSpace> space,
                       SolveReport* report = nullptr);

struct PointValue {
  double value = 0.0;
  double grad_x = 0.0;
  double grad_y = 0.0;
};

/// u_h and (optionally) its physical gradient at a parametric point. The
/// gradient is undefined on the collapsed edge; requesting it at u = 0
/// throws.
PointValue evaluate(const DiscreteSolution& solution, double u, double v, bool with_gradient);

/// Same at a physical point, located via PolarSplineSpace::parametric_preimage.
PointValue evaluate_at(const DiscreteSolution& solution, Point2 x, bool with_gradient);

}  // namespace polar_iga
