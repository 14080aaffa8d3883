// Times the OpenMP assembly and error-norm kernels against their serial
// reference implementations and checks that both produce the same numbers.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>

#include "polar_iga/analysis.hpp"
#include "polar_iga/parallel.hpp"

using namespace polar_iga;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int N = argc > 1 ? std::atoi(argv[1]) : 33;
  const int p = argc > 2 ? std::atoi(argv[2]) : 3;

  const ManufacturedProblem problem = pacman_problem();
  const double mu = grading_parameter(problem.nu, p);
  auto space = std::make_shared<PolarSplineSpace>(problem.make_patch(), p, std::max(p, 2), N, N, mu);
  const QuadratureRule quad{6};
  auto f = [&problem](Point2 x) { return problem.rhs_at(x); };

  std::printf("pacman p=%d N=%d mu=%.3f dofs=%d elements=%d threads=%d\n", p, N, mu,
              space->n_dofs(), space->mesh().num_elements(), max_threads());

  auto t0 = std::chrono::steady_clock::now();
  const LinearSystem serial = assemble_reference(*space, f, quad);
  const double t_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const LinearSystem parallel = assemble(*space, f, quad);
  const double t_parallel = seconds_since(t0);

  double max_diff = (serial.load - parallel.load).cwiseAbs().maxCoeff();
  const Eigen::SparseMatrix<double> diff = serial.stiffness - parallel.stiffness;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it) {
      max_diff = std::max(max_diff, std::abs(it.value()));
    }
  }
  std::printf("assemble: serial %.3fs, parallel %.3fs, speedup %.2fx, max diff %.3e\n", t_serial,
              t_parallel, t_serial / t_parallel, max_diff);

  const LinearSystem reduced = apply_dirichlet(serial, space->dirichlet_dofs(problem.dirichlet_edges));
  const DiscreteSolution solution = solve(reduced, space);

  t0 = std::chrono::steady_clock::now();
  const ErrorNorms ref = error_norms_reference(solution, problem, quad);
  const double t_norm_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const ErrorNorms par = error_norms(solution, problem, quad);
  const double t_norm_parallel = seconds_since(t0);

  std::printf("error_norms: serial %.3fs, parallel %.3fs, speedup %.2fx, diff l2 %.3e h1 %.3e\n",
              t_norm_serial, t_norm_parallel, t_norm_serial / t_norm_parallel,
              std::abs(ref.l2 - par.l2), std::abs(ref.h1 - par.h1));
  std::printf("errors: l2 %.6e h1 %.6e\n", par.l2, par.h1);
  return 0;
}
