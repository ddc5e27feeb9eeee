#ifndef WLMC_OT_HPP
#define WLMC_OT_HPP

#include "wlmc/core.hpp"

#include <span>

namespace wlmc {

/// Transport plan with prescribed marginals (row sums = source, column sums =
/// target, both within kCouplingTol).
struct Coupling {
  Matrix plan;
  ProbVec source;
  ProbVec target;

  Coupling(Matrix plan, ProbVec source, ProbVec target);
};

struct OtResult {
  double value = 0.0;
  Coupling coupling;
};

/// l1-Wasserstein distance on the real line via the quantile coupling.
/// O(n log n) including the sorts.
double wasserstein_1d(std::span<const double> a_points, const ProbVec& a_weights,
                      std::span<const double> b_points, const ProbVec& b_weights);

/// Exact discrete optimal transport by network simplex on the dense
/// transportation problem. Value is within 1e-7 relative (1e-9 absolute) of
/// the LP optimum; the returned coupling is feasible. Which optimal plan is
/// returned is unspecified; only the value is contractual.
OtResult ot_solve(const Matrix& cost, const ProbVec& source, const ProbVec& target);

/// Optimal value only; skips materializing the coupling.
double ot_value(const Matrix& cost, const ProbVec& source, const ProbVec& target);

/// Brute-force LP optimum for tiny instances (n*m <= 20): enumerates every
/// spanning-tree basic solution of the transportation polytope. Test oracle,
/// deliberately independent of the simplex code paths.
double lp_vertex_oracle(const Matrix& cost, const ProbVec& source, const ProbVec& target);

namespace detail {
// Raw-vector entry point shared by the nested-recursion hot loops; weights
// must already be valid probability vectors.
double transport_value(const Matrix& cost, const Vector& source, const Vector& target);
Matrix transport_plan(const Matrix& cost, const Vector& source, const Vector& target,
                      double* value_out);
}  // namespace detail

}  // namespace wlmc

#endif  // WLMC_OT_HPP
