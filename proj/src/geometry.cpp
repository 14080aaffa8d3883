#include "polar_iga/geometry.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace polar_iga {

double norm(Point2 a) { return std::hypot(a.x, a.y); }

namespace {

constexpr double kGeomTol = 1e-12;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void validate_polar_patch(const PolarPatch& patch) {
  require(patch.kv_u.degree == 1, "polar patch: radial knot vector must have degree 1");
  require(patch.kv_u.knots.size() == 4, "polar patch: radial knot vector must be {0,0,1,1}");
  require(patch.corner_angle > 0.0 && patch.corner_angle <= 2.0 * M_PI + kGeomTol,
          "polar patch: corner angle must lie in (0, 2*pi]");

  const KnotVector& kv = patch.kv_v;
  const int p2 = kv.degree;
  const int nb = kv.num_breakpoints();
  const double h = 1.0 / (nb - 1);
  for (int j = 0; j < nb; ++j) {
    require(std::abs(kv.breakpoints[j] - j * h) <= kGeomTol,
            "polar patch: angular breakpoints must be uniformly spaced");
    if (j > 0 && j + 1 < nb) {
      require(kv.multiplicities[j] == p2, "polar patch: angular interior multiplicity must equal the degree");
    }
  }

  const int n1 = patch.num_u();
  const int n2 = patch.num_v();
  require(n1 == 2, "polar patch: exactly two control rows expected");
  require(static_cast<int>(patch.control_points.size()) == n1 * n2, "polar patch: control net size mismatch");
  require(static_cast<int>(patch.weights.size()) == n1 * n2, "polar patch: weight grid size mismatch");
  require(std::abs(patch.polar_point.x) <= kGeomTol && std::abs(patch.polar_point.y) <= kGeomTol,
          "polar patch: polar point must be the origin");
  for (int i2 = 0; i2 < n2; ++i2) {
    require(norm(patch.control(0, i2) - patch.polar_point) <= kGeomTol,
            "polar patch: first control row must collapse into the polar point");
    require(patch.weight(0, i2) > 0.0 && patch.weight(1, i2) > 0.0, "polar patch: weights must be positive");
    require(std::abs(patch.weight(0, i2) - patch.weight(1, i2)) <= kGeomTol,
            "polar patch: the two rows must carry identical weights");
  }
}

int default_sector_segments(double omega) {
  if (std::abs(omega - 5.0 * M_PI / 3.0) <= 1e-9) return 3;
  return static_cast<int>(std::ceil(omega / (M_PI / 2.0) - 1e-12));
}

PolarPatch make_circular_sector(double omega, int segments) {
  require(omega > 0.0 && omega <= 2.0 * M_PI + kGeomTol, "circular sector: omega must lie in (0, 2*pi]");
  require(segments >= 1, "circular sector: need at least one segment");
  const double alpha = omega / segments;
  require(alpha < M_PI - kGeomTol, "circular sector: segment angle must be below pi");

  PolarPatch patch;
  patch.corner_angle = omega;
  patch.kv_u = make_open_knot_vector({0.0, 1.0}, 1, 1);
  std::vector<double> z(segments + 1);
  for (int s = 0; s <= segments; ++s) z[s] = static_cast<double>(s) / segments;
  patch.kv_v = make_open_knot_vector(z, 2, 2);

  const int n2 = patch.kv_v.num_basis();  // 2 * segments + 1
  patch.control_points.resize(2 * n2);
  patch.weights.resize(2 * n2);
  const double w_mid = std::cos(0.5 * alpha);
  for (int i2 = 0; i2 < n2; ++i2) {
    const bool on_arc = (i2 % 2 == 0);
    const double theta = on_arc ? (i2 / 2) * alpha : (i2 / 2 + 0.5) * alpha;
    // Odd entries sit at the tangent intersection of the arc segment.
    const double radius = on_arc ? 1.0 : 1.0 / w_mid;
    const double w = on_arc ? 1.0 : w_mid;
    patch.control_points[0 * n2 + i2] = {0.0, 0.0};
    patch.control_points[1 * n2 + i2] = {radius * std::cos(theta), radius * std::sin(theta)};
    patch.weights[0 * n2 + i2] = w;
    patch.weights[1 * n2 + i2] = w;
  }
  validate_polar_patch(patch);
  return patch;
}

PolarPatch make_l_shape() {
  PolarPatch patch;
  patch.corner_angle = 1.5 * M_PI;
  patch.kv_u = make_open_knot_vector({0.0, 1.0}, 1, 1);
  patch.kv_v = make_open_knot_vector({0.0, 0.25, 0.5, 0.75, 1.0}, 1, 1);
  const std::vector<Point2> outer = {{1, 0}, {1, 1}, {-1, 1}, {-1, -1}, {0, -1}};
  const int n2 = patch.kv_v.num_basis();
  patch.control_points.resize(2 * n2);
  patch.weights.assign(2 * n2, 1.0);
  for (int i2 = 0; i2 < n2; ++i2) {
    patch.control_points[0 * n2 + i2] = {0.0, 0.0};
    patch.control_points[1 * n2 + i2] = outer[i2];
  }
  validate_polar_patch(patch);
  return patch;
}

namespace {

struct Homogeneous {
  double x = 0.0, y = 0.0, w = 0.0;
  double dx = 0.0, dy = 0.0, dw = 0.0;
};

// Homogeneous boundary data sum_{i2} w c B(v) and the weight function, with
// first derivatives in v.
Homogeneous boundary_homogeneous(const PolarPatch& patch, double v) {
  BasisEvaluation bv;
  eval_basis(patch.kv_v, v, 1, bv);
  Homogeneous h;
  for (int j = 0; j < bv.count; ++j) {
    const int i2 = bv.first_index + j;
    const double w = patch.weight(1, i2);
    const Point2& c = patch.control(1, i2);
    h.x += w * c.x * bv.value(0, j);
    h.y += w * c.y * bv.value(0, j);
    h.w += w * bv.value(0, j);
    h.dx += w * c.x * bv.value(1, j);
    h.dy += w * c.y * bv.value(1, j);
    h.dw += w * bv.value(1, j);
  }
  return h;
}

}  // namespace

Point2 boundary_curve(const PolarPatch& patch, double v) {
  const Homogeneous h = boundary_homogeneous(patch, v);
  return {h.x / h.w, h.y / h.w};
}

Point2 map_point(const PolarPatch& patch, double u, double v) {
  // F(u, v) = u * F2(v) for every polar patch.
  return u * boundary_curve(patch, v);
}

GeometryJacobian jacobian(const PolarPatch& patch, double u, double v) {
  const Homogeneous h = boundary_homogeneous(patch, v);
  const Point2 f2{h.x / h.w, h.y / h.w};
  const Point2 df2{(h.dx - f2.x * h.dw) / h.w, (h.dy - f2.y * h.dw) / h.w};
  GeometryJacobian jac;
  jac.dx_du = f2.x;
  jac.dy_du = f2.y;
  jac.dx_dv = u * df2.x;
  jac.dy_dv = u * df2.y;
  jac.det = jac.dx_du * jac.dy_dv - jac.dx_dv * jac.dy_du;
  return jac;
}

double ReferenceMap::angle(double phi) const {
  if (kind == Kind::sector) return omega * phi;
  if (phi <= 0.25) return (2.0 / 3.0) * omega * phi;
  if (phi <= 0.75) return omega * ((4.0 / 3.0) * phi - 1.0 / 6.0);
  return omega * ((2.0 / 3.0) * phi + 1.0 / 3.0);
}

double ReferenceMap::radius(double Phi) const {
  if (kind == Kind::sector) return 1.0;
  if (Phi <= 0.25 * M_PI) return 1.0 / std::cos(Phi);
  if (Phi <= 0.75 * M_PI) return 1.0 / std::sin(Phi);
  if (Phi <= 1.25 * M_PI) return -1.0 / std::cos(Phi);
  return -1.0 / std::sin(Phi);
}

Point2 ReferenceMap::boundary(double phi) const {
  const double Phi = angle(phi);
  const double R = radius(Phi);
  return {R * std::cos(Phi), R * std::sin(Phi)};
}

Point2 ReferenceMap::map(double r, double phi) const { return r * boundary(phi); }

ReferenceMap make_reference_map(ReferenceMap::Kind kind, double omega) {
  if (kind == ReferenceMap::Kind::lshape) {
    require(std::abs(omega - 1.5 * M_PI) <= 1e-9, "reference map: the L-shape has omega = 3*pi/2");
  } else {
    require(omega > 0.0 && omega <= 2.0 * M_PI + kGeomTol, "reference map: omega must lie in (0, 2*pi]");
  }
  ReferenceMap ref;
  ref.kind = kind;
  ref.omega = omega;
  return ref;
}

ReferenceComparison compare_to_reference(const PolarPatch& patch, const ReferenceMap& ref,
                                         int n_samples) {
  require(n_samples >= 2, "compare_to_reference: need at least two samples");
  ReferenceComparison cmp;
  constexpr double kSameTol = 1e-12;
  // Uniform grid excluding the endpoints; runs of |diff| < 1e-12 are merged
  // into intervals.
  bool open_x = false, open_y = false;
  Interval run_x{}, run_y{};
  for (int i = 1; i + 1 <= n_samples; ++i) {
    const double phi = static_cast<double>(i) / n_samples;
    const Point2 f = boundary_curve(patch, phi);
    const Point2 g = ref.boundary(phi);
    const double dx = std::abs(f.x - g.x);
    const double dy = std::abs(f.y - g.y);
    cmp.max_diff_x = std::max(cmp.max_diff_x, dx);
    cmp.max_diff_y = std::max(cmp.max_diff_y, dy);
    auto track = [phi](bool& open, Interval& run, std::vector<Interval>& out, double diff) {
      if (diff < kSameTol) {
        if (!open) {
          open = true;
          run.lo = phi;
        }
        run.hi = phi;
      } else if (open) {
        open = false;
        out.push_back(run);
      }
    };
    track(open_x, run_x, cmp.identical_x, dx);
    track(open_y, run_y, cmp.identical_y, dy);
  }
  if (open_x) cmp.identical_x.push_back(run_x);
  if (open_y) cmp.identical_y.push_back(run_y);
  cmp.max_diff = std::max(cmp.max_diff_x, cmp.max_diff_y);
  return cmp;
}

std::string patch_to_json(const PolarPatch& patch) {
  nlohmann::json j;
  j["degrees"] = {patch.kv_u.degree, patch.kv_v.degree};
  j["knots_u"] = patch.kv_u.knots;
  j["knots_v"] = patch.kv_v.knots;
  nlohmann::json pts = nlohmann::json::array();
  for (const Point2& c : patch.control_points) pts.push_back({c.x, c.y});
  j["control_points"] = pts;
  j["weights"] = patch.weights;
  j["corner_angle"] = patch.corner_angle;
  return j.dump(2);
}

PolarPatch patch_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  PolarPatch patch;
  patch.kv_u = make_knot_vector_from_knots(j.at("knots_u").get<std::vector<double>>(),
                                           j.at("degrees").at(0).get<int>());
  patch.kv_v = make_knot_vector_from_knots(j.at("knots_v").get<std::vector<double>>(),
                                           j.at("degrees").at(1).get<int>());
  for (const auto& p : j.at("control_points")) {
    patch.control_points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  patch.weights = j.at("weights").get<std::vector<double>>();
  patch.corner_angle = j.at("corner_angle").get<double>();
  validate_polar_patch(patch);
  return patch;
}

void save_patch(const PolarPatch& patch, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_patch: cannot open " + path);
  os << patch_to_json(patch) << "\n";
}

PolarPatch load_patch(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_patch: cannot open " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return patch_from_json(buf.str());
}

}  // namespace polar_iga
