#ifndef WLMC_WL_HPP
#define WLMC_WL_HPP

#include "wlmc/core.hpp"
#include "wlmc/ot.hpp"

namespace wlmc {

/// Pairwise distances between the depth-k hierarchy labels of two chains.
/// Depth 0 holds plain Euclidean label distances; each lift replaces entry
/// (i, j) by the transport cost between kernel rows i and j over the previous
/// matrix. The hierarchy itself is never materialized.
struct CostMatrix {
  Matrix entries;
  int depth = 0;
};

/// k-th power of a Markov kernel; rows stay stochastic within 1e-10.
struct KStepKernel {
  Matrix rows;
  int k = 1;
};

/// Euclidean distances between label rows. Depth tag 0.
CostMatrix cost_matrix_depth0(const Lmmc& x, const Lmmc& y);

/// One level of the depth recursion: entry (i,j) becomes the optimal
/// transport cost between kernel rows i of x and j of y with `prev` as ground
/// cost. The inner solves are independent; `jobs` > 1 runs them in parallel
/// (values are deterministic regardless of schedule).
CostMatrix lift_cost(const CostMatrix& prev, const Lmmc& x, const Lmmc& y, int jobs = 1);

/// Depth-k distance: k lifts of the depth-0 matrix, then one outer transport
/// against the stationary measures. k = 0 compares global label
/// distributions.
double wl_distance(const Lmmc& x, const Lmmc& y, int k, int jobs = 1);

/// Matrix power by repeated squaring, O(n^3 log k).
KStepKernel kstep_kernel(const MarkovKernel& kernel, int k);

/// Lower bound of the depth-k distance: ground costs between label
/// pushforwards of the k-step kernels (closed-form 1-d transport when the
/// label dimension is 1, exact OT otherwise), then one outer transport.
/// Coincides with wl_distance at k = 1.
double wllb_distance(const Lmmc& x, const Lmmc& y, int k);

struct SupResult {
  double value = 0.0;
  int depth_reached = 0;
};

/// Evaluates the depth distances at increasing k and returns the first value
/// above kZeroDistance, or (0, |X|+|Y|) once every depth up to |X|+|Y| came
/// back zero. That stopping rule is proven for graph-induced chains with
/// injectively relabeled labels and q in (1/2, 1); for arbitrary chains it is
/// a heuristic.
SupResult wl_distance_sup(const Lmmc& x, const Lmmc& y, int jobs = 1);

}  // namespace wlmc

#endif  // WLMC_WL_HPP
