#pragma once

#include <vector>

namespace polar_iga {

/// Tolerance for deciding that two knot values coincide. All knots in this
/// library come from closed-form expressions, so an absolute test suffices.
inline constexpr double kKnotTol = 1e-12;

/// A p-open knot vector on [0, 1]: the first and last knot repeat p+1 times,
/// interior multiplicities never exceed p+1. Immutable after construction.
struct KnotVector {
  int degree = 0;
  std::vector<double> knots;           // size n + degree + 1
  std::vector<double> breakpoints;     // distinct knot values (Z)
  std::vector<int> multiplicities;     // per breakpoint

  int num_basis() const { return static_cast<int>(knots.size()) - degree - 1; }
  int num_breakpoints() const { return static_cast<int>(breakpoints.size()); }
  int num_elements() const { return num_breakpoints() - 1; }

  /// Index i with knots[i] <= t < knots[i+1]; t = 1 lands in the last
  /// nonempty span so endpoint evaluation stays exact.
  int find_span(double t) const;
};

/// Builds a validated KnotVector from distinct breakpoints. Breakpoints must
/// start at 0, end at 1 and be strictly increasing; interior multiplicities
/// must lie in [1, degree+1]. Endpoint multiplicities are forced to degree+1.
KnotVector make_open_knot_vector(const std::vector<double>& breakpoints,
                                 const std::vector<int>& interior_multiplicities, int degree);

/// Same, with one multiplicity for every interior breakpoint.
KnotVector make_open_knot_vector(const std::vector<double>& breakpoints,
                                 int interior_multiplicity, int degree);

/// Rebuilds breakpoints/multiplicities from a raw knot list and validates.
KnotVector make_knot_vector_from_knots(std::vector<double> knots, int degree);

/// Maximally smooth refinement of {0,0,1,1}: degree p with N uniformly spaced
/// simple breakpoints.
KnotVector uniform_refine(int degree, int num_breakpoints);

/// Graded refinement: interior breakpoints ((j-1)h)^(1/mu) with h = 1/(N-1).
/// mu = 1 reproduces uniform_refine bitwise.
KnotVector graded_refine(int degree, int num_breakpoints, double mu);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Support extension of element j (0-based): the open interval
/// (knots[i-p], knots[i+p+1]) where the element is (knots[i], knots[i+1]).
Interval support_extension(const KnotVector& kv, int element_index);

/// Values (and derivatives up to max_derivative) of the degree+1 possibly
/// nonzero basis functions at t. value(k, j) is the k-th derivative of
/// basis function first_index + j.
struct BasisEvaluation {
  int first_index = 0;
  int count = 0;
  int orders = 1;
  std::vector<double> data;  // data[k * count + j]

  double value(int derivative, int local) const { return data[derivative * count + local]; }
};

/// Cox-de Boor evaluation with derivatives (The NURBS Book, A2.2/A2.3).
/// Requires t in [0, 1] and 0 <= max_derivative <= degree.
BasisEvaluation eval_basis(const KnotVector& kv, double t, int max_derivative);
void eval_basis(const KnotVector& kv, double t, int max_derivative, BasisEvaluation& out);

}  // namespace polar_iga
