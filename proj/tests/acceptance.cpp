// Acceptance suite: runs every reproducibility criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "polar_iga/analysis.hpp"
#include "polar_iga/dual_basis.hpp"

using namespace polar_iga;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return buffer;
}

const std::vector<int> kLevels = {5, 9, 17, 33};

// --- criterion 1: Pacman uniform rates, independent of p ---
void criterion_1() {
  const ManufacturedProblem problem = pacman_problem();
  bool ok = true;
  std::string detail = "pacman uniform rates:";
  for (int p : {1, 2, 3}) {
    const auto t0 = std::chrono::steady_clock::now();
    const ConvergenceReport r = convergence_study(problem, p, GradingMode::uniform, 0.0, kLevels);
    const double elapsed = seconds_since(t0);
    const double h1 = r.slope_h1, l2 = r.slope_l2;
    const bool pass = h1 >= 0.45 && h1 <= 0.75 && l2 >= 1.0 && l2 <= 1.4 && elapsed < 120.0;
    ok = ok && pass;
    detail += fmt(" p=%d H1 %.3f in [0.45,0.75], L2 %.3f in [1.0,1.4], %.1fs;", p, h1, l2, elapsed);
  }
  report(1, ok, detail);
}

// --- criterion 2: Pacman graded rates, mu = 0.9 nu / p ---
void criterion_2() {
  const ManufacturedProblem problem = pacman_problem();
  bool ok = true;
  std::string detail = "pacman graded rates:";
  for (int p : {2, 3}) {
    const double mu = 0.9 * 0.6 / p;
    const auto t0 = std::chrono::steady_clock::now();
    const ConvergenceReport r =
        convergence_study(problem, p, GradingMode::explicit_value, mu, kLevels);
    const double elapsed = seconds_since(t0);
    const double h1 = r.slope_h1, l2 = r.slope_l2;
    const bool pass = h1 >= p - 0.2 && h1 <= p + 0.2 && l2 >= p + 0.75 && l2 <= p + 1.25 &&
                      elapsed < 300.0;
    ok = ok && pass;
    detail += fmt(" p=%d mu=%.2f H1 %.3f in [%.1f,%.1f], L2 %.3f in [%.2f,%.2f], %.1fs;", p, mu,
                  h1, p - 0.2, p + 0.2, l2, p + 0.75, p + 1.25, elapsed);
    if (!pass) {
      // context for the failure: the same study one doubling deeper shows
      // where the slopes are headed
      std::vector<int> extended = kLevels;
      extended.push_back(2 * kLevels.back() - 1);
      const ConvergenceReport deep =
          convergence_study(problem, p, GradingMode::explicit_value, mu, extended);
      detail += fmt(" [levels to N=%d give H1 %.3f, L2 %.3f]", extended.back(), deep.slope_h1,
                    deep.slope_l2);
    }
  }
  report(2, ok, detail);
}

// --- criterion 3: L-shape mixed-BC rates ---
void criterion_3() {
  // This criterion pins no level list; one extra doubling past the shared
  // default reaches the settled regime of the mu = 0.15 grading.
  const std::vector<int> levels = {5, 9, 17, 33, 65};
  const ManufacturedProblem problem = lshape_problem();
  const ConvergenceReport uniform = convergence_study(problem, 2, GradingMode::uniform, 0.0, levels);
  const ConvergenceReport graded =
      convergence_study(problem, 2, GradingMode::explicit_value, 0.15, levels);
  const double uh1 = uniform.slope_h1, ul2 = uniform.slope_l2;
  const double gh1 = graded.slope_h1, gl2 = graded.slope_l2;
  const bool ok = uh1 >= 0.23 && uh1 <= 0.45 && ul2 >= 0.55 && ul2 <= 0.85 && gh1 >= 1.8 &&
                  gh1 <= 2.2 && gl2 >= 2.7 && gl2 <= 3.3;
  report(3, ok,
         fmt("lshape p=2 levels to N=65: uniform H1 %.3f in [0.23,0.45], L2 %.3f in [0.55,0.85]; "
             "graded mu=0.15 H1 %.3f in [1.8,2.2], L2 %.3f in [2.7,3.3]",
             uh1, ul2, gh1, gl2));
}

// --- criterion 4: local quasi-uniformity of graded meshes ---
void criterion_4() {
  bool ok = true;
  std::string detail = "quasi-uniformity:";
  for (double mu : {0.2, 0.5, 0.9, 1.0}) {
    const KnotVector kv = graded_refine(2, 129, mu);
    const BezierMesh mesh = build_mesh(kv, uniform_refine(2, 5), mu);
    const QuasiUniformityReport qr = quasi_uniformity_report(mesh);
    const double theta = std::pow(2.0, 1.0 / mu) - 1.0;
    bool bounds = true, monotone = true;
    for (size_t j = 0; j < qr.ratios.size(); ++j) {
      bounds = bounds && qr.ratios[j] >= 1.0 / theta - 1e-12 && qr.ratios[j] <= theta + 1e-12;
      if (j > 0) monotone = monotone && qr.ratios[j] >= qr.ratios[j - 1] - 1e-13;
    }
    const double theta_first = std::abs(qr.ratios.front() - 1.0 / theta);
    const bool pass = bounds && monotone && theta_first < 1e-13 && std::abs(qr.theta1 - theta) == 0.0;
    ok = ok && pass;
    detail += fmt(" mu=%.1f theta1=%.3f bounds=%d monotone=%d |Theta(1)-closed form|=%.1e;", mu,
                  theta, bounds ? 1 : 0, monotone ? 1 : 0, theta_first);
  }
  report(4, ok, detail);
}

// --- criterion 5: projector suite over both geometries ---
double dual_identity_error(const KnotVector& kv, bool boundary) {
  const DualBasis dual(kv, boundary);
  const int n = kv.num_basis();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double value = dual.apply(i, [&](double t) {
        const BasisEvaluation b = eval_basis(kv, t, 0);
        const int local = k - b.first_index;
        return (local >= 0 && local < b.count) ? b.value(0, local) : 0.0;
      });
      worst = std::max(worst, std::abs(value - (i == k ? 1.0 : 0.0)));
    }
  }
  return worst;
}

// Physical evaluation of a coefficient vector through the parametric
// preimage (the push-forward of a space member).
std::function<double(Point2)> physical_field(const PolarSplineSpace& space,
                                             std::vector<double> coeff) {
  return [&space, coeff = std::move(coeff)](Point2 x) {
    const Point2 zeta = space.parametric_preimage(x);
    return space.evaluate(coeff, zeta.x, zeta.y, 0).value;
  };
}

void criterion_5() {
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  bool ok = true;
  std::string detail = "projector:";
  for (const char* name : {"pacman", "lshape"}) {
    const PolarPatch patch = std::string(name) == "pacman" ? make_circular_sector(5.0 * M_PI / 3.0, 3)
                                                           : make_l_shape();
    for (int p : {2, 3}) {
      for (double mu : {0.3, 1.0}) {
        const PolarSplineSpace space(patch, p, p, 5, 5, mu);
        const double dual_err = std::max(
            std::max(dual_identity_error(space.kv_u(), false), dual_identity_error(space.kv_u(), true)),
            std::max(dual_identity_error(space.kv_v(), false), dual_identity_error(space.kv_v(), true)));

        std::vector<double> coeff(space.n_dofs());
        for (double& c : coeff) c = dist(rng);
        const std::vector<double> roundtrip = space.project(physical_field(space, coeff));
        double repro_err = 0.0;
        for (int dof = 0; dof < space.n_dofs(); ++dof) {
          repro_err = std::max(repro_err, std::abs(roundtrip[dof] - coeff[dof]));
        }

        const std::vector<double> affine =
            space.project([](Point2 x) { return 1.75 + 0.5 * x.x - 0.25 * x.y; });
        const double polar_err =
            std::abs(space.evaluate(affine, 0.0, 0.5, 0).value - 1.75);

        const bool pass = dual_err < 1e-10 && repro_err < 1e-9 && polar_err < 1e-12;
        ok = ok && pass;
        if (!pass) {
          detail += fmt(" [%s p=%d mu=%.1f dual=%.1e repro=%.1e polar=%.1e]", name, p, mu, dual_err,
                        repro_err, polar_err);
        }
      }
    }
  }
  if (ok) detail += " dual identity < 1e-10, reproduction < 1e-9, value at P < 1e-12 for both geometries, p in {2,3}, mu in {0.3,1}";
  report(5, ok, detail);
}

// --- criterion 6: geometry exactness and reference-map comparison ---
void criterion_6() {
  const PolarPatch sector = make_circular_sector(5.0 * M_PI / 3.0, 3);
  double arc_err = 0.0;
  for (int i = 0; i <= 200; ++i) {
    arc_err = std::max(arc_err, std::abs(norm(boundary_curve(sector, i / 200.0)) - 1.0));
  }

  const PolarPatch lshape = make_l_shape();
  const ReferenceMap ref = make_reference_map(ReferenceMap::Kind::lshape, 1.5 * M_PI);
  const ReferenceComparison cmp = compare_to_reference(lshape, ref, 1000);

  auto component_diff = [&](int component, double lo, double hi) {
    double worst = 0.0;
    for (int i = 0; i <= 500; ++i) {
      const double phi = lo + (hi - lo) * i / 500.0;
      const Point2 f = boundary_curve(lshape, phi);
      const Point2 g = ref.boundary(phi);
      worst = std::max(worst, component == 0 ? std::abs(f.x - g.x) : std::abs(f.y - g.y));
    }
    return worst;
  };
  // Exact-agreement intervals of Example 3.3 under its piecewise-linear
  // angle map: the first component on [0,1/4] u [1/2,3/4] (containing the
  // listed [0,1/6]), the second on [1/4,1/2] u [3/4,1] (containing [5/6,1]).
  const double ident = std::max(
      std::max(component_diff(0, 0.0, 1.0 / 6.0), component_diff(0, 0.5, 0.75)),
      std::max(component_diff(1, 0.25, 0.5), component_diff(1, 5.0 / 6.0, 1.0)));

  const bool ok = arc_err < 1e-12 && cmp.max_diff >= 0.05 && cmp.max_diff <= 0.15 && ident < 1e-12;
  report(6, ok,
         fmt("sector | |F(1,.)|-1 | = %.2e < 1e-12; lshape max component diff %.4f in "
             "[0.05,0.15]; identity-interval deviation %.2e < 1e-12",
             arc_err, cmp.max_diff, ident));
}

// --- criterion 7: DOF invariance between uniform and graded meshes ---
void criterion_7() {
  bool ok = true;
  int checked = 0;
  for (const char* name : {"pacman", "lshape"}) {
    const PolarPatch patch = std::string(name) == "pacman" ? make_circular_sector(5.0 * M_PI / 3.0, 3)
                                                           : make_l_shape();
    for (int p : {1, 2, 3}) {
      const int pv = std::max(p, patch.kv_v.degree);
      for (int N : kLevels) {
        const PolarSplineSpace uniform(patch, p, pv, N, N, 1.0);
        const PolarSplineSpace graded(patch, p, pv, N, N, 0.3);
        ok = ok && uniform.n_dofs() == graded.n_dofs();
        ++checked;
      }
    }
  }
  report(7, ok, fmt("n_dofs(mu=1) == n_dofs(mu=0.3) for %d (geometry, p, N) combinations", checked));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  std::printf("%s: %d criterion(s) failed, total %.0fs\n", failures == 0 ? "ACCEPTED" : "REJECTED",
              failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
