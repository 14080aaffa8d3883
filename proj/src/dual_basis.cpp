#include "polar_iga/dual_basis.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "polar_iga/quadrature.hpp"

namespace polar_iga {

DualBasis::DualBasis(KnotVector kv, bool boundary_mode) : kv_(std::move(kv)), boundary_(boundary_mode) {
  const int p = kv_.degree;
  const int n = kv_.num_basis();
  const int q = p + 2;
  functionals_.resize(n);

  BasisEvaluation basis;
  for (int i = 0; i < n; ++i) {
    if (boundary_ && (i == 0 || i == n - 1)) {
      Functional f;
      f.nodes = {i == 0 ? 0.0 : 1.0};
      f.weights = {1.0};
      f.point_evaluation = true;
      functionals_[i] = std::move(f);
      continue;
    }

    const double lo = kv_.knots[i];
    const double hi = kv_.knots[i + p + 1];

    // Basis functions whose support overlaps (lo, hi) in positive measure.
    std::vector<int> active;
    for (int k = std::max(0, i - p); k <= std::min(n - 1, i + p); ++k) {
      if (kv_.knots[k] < hi - kKnotTol && kv_.knots[k + p + 1] > lo + kKnotTol) active.push_back(k);
    }
    const int m = static_cast<int>(active.size());
    int pos_i = -1;
    for (int a = 0; a < m; ++a) {
      if (active[a] == i) pos_i = a;
    }
    if (pos_i < 0) throw std::logic_error("DualBasis: function not active on its own support");

    // Quadrature nodes over the nonempty spans inside the support.
    Functional f;
    for (int j = 0; j < kv_.num_elements(); ++j) {
      const double a = kv_.breakpoints[j];
      const double b = kv_.breakpoints[j + 1];
      if (a < lo - kKnotTol || b > hi + kKnotTol) continue;
      const GaussRule rule = gauss_legendre_on(q, a, b);
      f.nodes.insert(f.nodes.end(), rule.nodes.begin(), rule.nodes.end());
      f.weights.insert(f.weights.end(), rule.weights.begin(), rule.weights.end());
    }

    // Local Gram system of the restricted basis functions.
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
    const int nq = static_cast<int>(f.nodes.size());
    Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m, nq);
    for (int qi = 0; qi < nq; ++qi) {
      eval_basis(kv_, f.nodes[qi], 0, basis);
      for (int a = 0; a < m; ++a) {
        const int local = active[a] - basis.first_index;
        if (local >= 0 && local <= p) tab(a, qi) = basis.value(0, local);
      }
    }
    for (int qi = 0; qi < nq; ++qi) {
      gram.noalias() += f.weights[qi] * tab.col(qi) * tab.col(qi).transpose();
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs(pos_i) = 1.0;
    const Eigen::VectorXd coeff = gram.ldlt().solve(rhs);

    // lambda_i(v) = int v * (sum_a coeff_a B_a): fold the dual weight into
    // the quadrature weights.
    for (int qi = 0; qi < nq; ++qi) {
      f.weights[qi] *= coeff.dot(tab.col(qi));
    }
    functionals_[i] = std::move(f);
  }
}

double DualBasis::apply(int i, const std::function<double(double)>& v) const {
  const Functional& f = functionals_.at(i);
  double sum = 0.0;
  for (size_t q = 0; q < f.nodes.size(); ++q) sum += f.weights[q] * v(f.nodes[q]);
  return sum;
}

std::vector<double> DualBasis::coefficients(const std::function<double(double)>& v) const {
  std::vector<double> out(size());
  for (int i = 0; i < size(); ++i) out[i] = apply(i, v);
  return out;
}

}  // namespace polar_iga
