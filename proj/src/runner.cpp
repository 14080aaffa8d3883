#include "polar_iga/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace polar_iga {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void write_solution_samples(const DiscreteSolution& solution, const std::filesystem::path& path,
                            int grid) {
  std::ofstream os = open_output(path);
  os << "zeta1,zeta2,x,y,u\n";
  char line[200];
  for (int a = 0; a <= grid; ++a) {
    for (int b = 0; b <= grid; ++b) {
      const double u = static_cast<double>(a) / grid;
      const double v = static_cast<double>(b) / grid;
      const Point2 x = solution.space->map_point(u, v);
      const PointValue val = evaluate(solution, u, v, false);
      std::snprintf(line, sizeof(line), "%.6f,%.6f,%.17g,%.17g,%.17g\n", u, v, x.x, x.y, val.value);
      os << line;
    }
  }
}

void write_plot_stub(const std::filesystem::path& path) {
  std::ofstream os = open_output(path);
  os << "#!/usr/bin/env python3\n"
        "\"\"\"Plot a convergence report produced by the polar-iga CLI.\"\"\"\n"
        "import csv\n"
        "import sys\n"
        "\n"
        "import matplotlib.pyplot as plt\n"
        "\n"
        "path = sys.argv[1] if len(sys.argv) > 1 else \"report.csv\"\n"
        "rows = [r for r in csv.DictReader(\n"
        "    line for line in open(path) if not line.startswith(\"#\"))]\n"
        "h = [float(r[\"h\"]) for r in rows]\n"
        "for key in (\"err_l2\", \"err_h1\"):\n"
        "    plt.loglog(h, [float(r[key]) for r in rows], \"o-\", label=key)\n"
        "plt.gca().invert_xaxis()\n"
        "plt.xlabel(\"h\")\n"
        "plt.ylabel(\"error\")\n"
        "plt.legend()\n"
        "plt.grid(True, which=\"both\", alpha=0.3)\n"
        "plt.savefig(\"report.png\", dpi=150)\n"
        "print(\"wrote report.png\")\n";
}

}  // namespace

void run_experiment(const RunConfig& config, std::ostream& log) {
  const ManufacturedProblem problem = problem_by_name(config.problem);
  const std::filesystem::path out_dir(config.output_dir);
  std::filesystem::create_directories(out_dir);

  StudyOptions options;
  options.quad_nodes = config.quadrature_nodes;
  const ConvergenceReport report = convergence_study(problem, config.degree, config.grading,
                                                     config.grading_value, config.levels, options);

  if (config.emit.report_csv) {
    auto os = open_output(out_dir / "report.csv");
    write_report_csv(report, os);
  }
  if (config.emit.report_json) {
    auto os = open_output(out_dir / "report.json");
    os << report_to_json(report).dump(2) << "\n";
  }
  if (config.emit.mesh_csv) {
    for (int N : config.levels) {
      const PolarPatch patch = problem.make_patch();
      const PolarSplineSpace space(patch, report.degree_u, report.degree_v, N, N, report.mu);
      auto os = open_output(out_dir / ("mesh_level" + std::to_string(N) + ".csv"));
      write_mesh_csv(space.mesh(), os);
    }
  }
  if (config.emit.solution_samples) {
    const LevelResult finest = solve_level(problem, report.degree_u, report.degree_v,
                                           config.levels.back(), report.mu, config.quadrature_nodes);
    write_solution_samples(finest.solution, out_dir / "solution_samples.csv", 100);
  }
  if (config.emit.report_csv || config.emit.report_json) {
    write_plot_stub(out_dir / "plot_report.py");
  }

  char line[200];
  std::snprintf(line, sizeof(line), "problem=%s degree=(%d,%d) mu=%.4f quadrature=%d\n",
                report.problem.c_str(), report.degree_u, report.degree_v, report.mu,
                report.quad_nodes);
  log << line;
  log << "level        h    ndofs      err_l2      err_h1  rate_l2  rate_h1\n";
  for (const ConvergenceRow& row : report.rows) {
    std::snprintf(line, sizeof(line), "%5d %8.5f %8d %11.4e %11.4e %8.3f %8.3f\n", row.level,
                  row.h, row.n_dofs, row.err_l2, row.err_h1, row.rate_l2, row.rate_h1);
    log << line;
  }
  std::snprintf(line, sizeof(line), "least-squares slopes (final 3 levels): L2 %.3f, H1 %.3f\n",
                report.slope_l2, report.slope_h1);
  log << line;
}

void export_geometry(const std::string& problem, const std::string& path) {
  const ManufacturedProblem p = problem_by_name(problem);
  save_patch(p.make_patch(), path);
}

void mesh_info(const RunConfig& config, std::ostream& log) {
  const ManufacturedProblem problem = problem_by_name(config.problem);
  const double mu = resolve_grading(problem, config.degree, config.grading, config.grading_value);
  const std::filesystem::path out_dir(config.output_dir);
  if (config.emit.mesh_csv) std::filesystem::create_directories(out_dir);

  char line[256];
  for (int N : config.levels) {
    const PolarPatch patch = problem.make_patch();
    const int degree_v = std::max(config.degree, patch.kv_v.degree);
    const PolarSplineSpace space(patch, config.degree, degree_v, N, N, mu);
    const BezierMesh mesh = space.mesh();
    const QuasiUniformityReport qr = quasi_uniformity_report(mesh);
    const DomainSplit split = split_domain(mesh, config.degree);
    double rmin = 1.0, rmax = 1.0;
    for (double r : qr.ratios) {
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
    std::snprintf(line, sizeof(line),
                  "N=%d mu=%.4f elements=%dx%d global_h=%.5f theta1=%.5f ratios=[%.5f, %.5f] "
                  "corner_columns=%zu ring_columns=%zu\n",
                  N, mu, mesh.num_columns(), mesh.num_rows(), mesh.global_h, qr.theta1, rmin, rmax,
                  split.corner_columns.size(), split.ring_columns.size());
    log << line;
    if (config.emit.mesh_csv) {
      auto os = open_output(out_dir / ("mesh_level" + std::to_string(N) + ".csv"));
      write_mesh_csv(mesh, os);
    }
  }
}

}  // namespace polar_iga
