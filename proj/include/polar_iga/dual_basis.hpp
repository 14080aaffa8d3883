#pragma once

#include <functional>
#include <vector>

#include "polar_iga/knots.hpp"

namespace polar_iga {

/// Dual functionals lambda_i with lambda_i(B_k) = delta_ik, realized as the
/// local L2-dual basis on supp(B_i): the Gram system of the basis functions
/// restricted to the support is solved against a biorthogonality constraint.
/// Each functional is a fixed quadrature recipe
///     lambda_i(v) = sum_q weights[q] * v(nodes[q]),
/// with (degree+2)-point Gauss per knot span, exact for spline arguments.
/// In boundary mode the first and last functionals become endpoint
/// evaluations v(0) and v(1), which preserves the dual property because open
/// knot vectors are interpolatory at 0 and 1.
class DualBasis {
 public:
  struct Functional {
    std::vector<double> nodes;
    std::vector<double> weights;
    bool point_evaluation = false;
  };

  DualBasis(KnotVector kv, bool boundary_mode);

  const KnotVector& knot_vector() const { return kv_; }
  bool boundary_mode() const { return boundary_; }
  int size() const { return kv_.num_basis(); }

  const Functional& functional(int i) const { return functionals_.at(i); }

  /// lambda_i(v)
  double apply(int i, const std::function<double(double)>& v) const;

  /// All spline coefficients lambda_i(v), i = 0..n-1.
  std::vector<double> coefficients(const std::function<double(double)>& v) const;

 private:
  KnotVector kv_;
  bool boundary_;
  std::vector<Functional> functionals_;
};

}  // namespace polar_iga
