#include "polar_iga/knots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polar_iga {

namespace {

void validate(const KnotVector& kv) {
  const int p = kv.degree;
  const int n = kv.num_basis();
  if (p < 0) throw std::invalid_argument("knot vector: negative degree");
  if (n < p + 1) throw std::invalid_argument("knot vector: too few knots");
  for (size_t i = 0; i + 1 < kv.knots.size(); ++i) {
    if (kv.knots[i] > kv.knots[i + 1]) throw std::invalid_argument("knot vector: knots not non-decreasing");
  }
  if (std::abs(kv.knots.front()) > kKnotTol || std::abs(kv.knots.back() - 1.0) > kKnotTol) {
    throw std::invalid_argument("knot vector: domain must be [0, 1]");
  }
  for (int i = 0; i <= p; ++i) {
    if (kv.knots[i] != kv.knots.front() || kv.knots[kv.knots.size() - 1 - i] != kv.knots.back()) {
      throw std::invalid_argument("knot vector: not p-open");
    }
  }
  const int m = kv.num_breakpoints();
  if (kv.multiplicities.front() != p + 1 || kv.multiplicities.back() != p + 1) {
    throw std::invalid_argument("knot vector: endpoint multiplicity must be degree+1");
  }
  int total = 0;
  for (int j = 0; j < m; ++j) {
    const int mult = kv.multiplicities[j];
    if (mult < 1 || mult > p + 1) throw std::invalid_argument("knot vector: multiplicity out of range");
    total += mult;
  }
  if (total != static_cast<int>(kv.knots.size())) throw std::invalid_argument("knot vector: multiplicity sum mismatch");
}

}  // namespace

int KnotVector::find_span(double t) const {
  const int p = degree;
  const int n = num_basis();
  if (t >= knots[n]) return n - 1;
  if (t <= knots[p]) return p;
  int lo = p, hi = n;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (t < knots[mid]) ? hi = mid : lo = mid;
  }
  return lo;
}

KnotVector make_open_knot_vector(const std::vector<double>& breakpoints,
                                 const std::vector<int>& interior_multiplicities, int degree) {
  const int m = static_cast<int>(breakpoints.size());
  if (degree < 0) throw std::invalid_argument("make_open_knot_vector: negative degree");
  if (m < 2) throw std::invalid_argument("make_open_knot_vector: need at least two breakpoints");
  if (static_cast<int>(interior_multiplicities.size()) != std::max(0, m - 2)) {
    throw std::invalid_argument("make_open_knot_vector: one multiplicity per interior breakpoint required");
  }
  if (std::abs(breakpoints.front()) > kKnotTol || std::abs(breakpoints.back() - 1.0) > kKnotTol) {
    throw std::invalid_argument("make_open_knot_vector: breakpoints must start at 0 and end at 1");
  }
  for (int j = 0; j + 1 < m; ++j) {
    if (!(breakpoints[j] < breakpoints[j + 1])) {
      throw std::invalid_argument("make_open_knot_vector: breakpoints must be strictly increasing");
    }
  }

  KnotVector kv;
  kv.degree = degree;
  kv.breakpoints = breakpoints;
  kv.multiplicities.resize(m);
  kv.multiplicities.front() = degree + 1;
  kv.multiplicities.back() = degree + 1;
  for (int j = 1; j + 1 < m; ++j) {
    const int mult = interior_multiplicities[j - 1];
    if (mult < 1 || mult > degree + 1) {
      throw std::invalid_argument("make_open_knot_vector: interior multiplicity out of [1, degree+1]");
    }
    kv.multiplicities[j] = mult;
  }
  for (int j = 0; j < m; ++j) {
    kv.knots.insert(kv.knots.end(), kv.multiplicities[j], breakpoints[j]);
  }
  validate(kv);
  return kv;
}

KnotVector make_open_knot_vector(const std::vector<double>& breakpoints, int interior_multiplicity,
                                 int degree) {
  const int interior = std::max(0, static_cast<int>(breakpoints.size()) - 2);
  return make_open_knot_vector(breakpoints, std::vector<int>(interior, interior_multiplicity), degree);
}

KnotVector make_knot_vector_from_knots(std::vector<double> knots, int degree) {
  KnotVector kv;
  kv.degree = degree;
  kv.knots = std::move(knots);
  for (double t : kv.knots) {
    if (!kv.breakpoints.empty() && std::abs(t - kv.breakpoints.back()) <= kKnotTol) {
      ++kv.multiplicities.back();
    } else {
      kv.breakpoints.push_back(t);
      kv.multiplicities.push_back(1);
    }
  }
  validate(kv);
  return kv;
}

KnotVector graded_refine(int degree, int num_breakpoints, double mu) {
  if (degree < 1) throw std::invalid_argument("graded_refine: degree must be >= 1");
  if (num_breakpoints < 2) throw std::invalid_argument("graded_refine: need at least two breakpoints");
  if (!(mu > 0.0) || mu > 1.0) throw std::invalid_argument("graded_refine: mu must be in (0, 1]");
  const int N = num_breakpoints;
  const double h = 1.0 / (N - 1);
  std::vector<double> z(N);
  z.front() = 0.0;
  z.back() = 1.0;
  for (int j = 1; j + 1 < N; ++j) {
    const double t = j * h;
    z[j] = (mu == 1.0) ? t : std::pow(t, 1.0 / mu);
  }
  return make_open_knot_vector(z, 1, degree);
}

KnotVector uniform_refine(int degree, int num_breakpoints) {
  return graded_refine(degree, num_breakpoints, 1.0);
}

Interval support_extension(const KnotVector& kv, int element_index) {
  if (element_index < 0 || element_index >= kv.num_elements()) {
    throw std::out_of_range("support_extension: element index out of range");
  }
  const int p = kv.degree;
  const int i = kv.find_span(kv.breakpoints[element_index]);
  const int n = kv.num_basis();
  const int lo = std::max(i - p, 0);
  const int hi = std::min(i + p + 1, n + p);
  return {kv.knots[lo], kv.knots[hi]};
}

void eval_basis(const KnotVector& kv, double t, int max_derivative, BasisEvaluation& out) {
  const int p = kv.degree;
  if (t < -kKnotTol || t > 1.0 + kKnotTol) throw std::invalid_argument("eval_basis: t outside [0, 1]");
  if (max_derivative < 0 || max_derivative > p) {
    throw std::invalid_argument("eval_basis: derivative order must be in [0, degree]");
  }
  t = std::clamp(t, 0.0, 1.0);
  const int span = kv.find_span(t);
  const int k = max_derivative;
  out.first_index = span - p;
  out.count = p + 1;
  out.orders = k + 1;
  out.data.assign(static_cast<size_t>(out.orders) * out.count, 0.0);

  // ndu holds the basis table and the knot differences (NURBS Book A2.3).
  std::vector<double> ndu((p + 1) * (p + 1)), left(p + 1), right(p + 1);
  auto at = [p](std::vector<double>& m, int r, int c) -> double& { return m[r * (p + 1) + c]; };
  at(ndu, 0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = t - kv.knots[span + 1 - j];
    right[j] = kv.knots[span + j] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      at(ndu, j, r) = right[r + 1] + left[j - r];
      const double temp = at(ndu, r, j - 1) / at(ndu, j, r);
      at(ndu, r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    at(ndu, j, j) = saved;
  }
  for (int j = 0; j <= p; ++j) out.data[j] = at(ndu, j, p);

  if (k == 0) return;

  std::vector<double> a(2 * (p + 1));
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0] = 1.0;
    for (int kk = 1; kk <= k; ++kk) {
      double d = 0.0;
      const int rk = r - kk;
      const int pk = p - kk;
      if (r >= kk) {
        a[s2 * (p + 1)] = a[s1 * (p + 1)] / at(ndu, pk + 1, rk);
        d = a[s2 * (p + 1)] * at(ndu, rk, pk);
      }
      const int j1 = (rk >= -1) ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? kk - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2 * (p + 1) + j] = (a[s1 * (p + 1) + j] - a[s1 * (p + 1) + j - 1]) / at(ndu, pk + 1, rk + j);
        d += a[s2 * (p + 1) + j] * at(ndu, rk + j, pk);
      }
      if (r <= pk) {
        a[s2 * (p + 1) + kk] = -a[s1 * (p + 1) + kk - 1] / at(ndu, pk + 1, r);
        d += a[s2 * (p + 1) + kk] * at(ndu, r, pk);
      }
      out.data[kk * out.count + r] = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int kk = 1; kk <= k; ++kk) {
    for (int j = 0; j <= p; ++j) out.data[kk * out.count + j] *= factor;
    factor *= (p - kk);
  }
}

BasisEvaluation eval_basis(const KnotVector& kv, double t, int max_derivative) {
  BasisEvaluation out;
  eval_basis(kv, t, max_derivative, out);
  return out;
}

}  // namespace polar_iga
