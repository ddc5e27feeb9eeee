#ifndef WLMC_GW_HPP
#define WLMC_GW_HPP

#include "wlmc/core.hpp"
#include "wlmc/ot.hpp"

#include <functional>
#include <vector>

namespace wlmc {

/// A k-step coupling between two Markov kernels, materialized layer by
/// layer: layers[l][x*m + y] couples kernel rows x and y, and composed[x*m+y]
/// is the resulting coupling between the k-step rows. Test-scale structure;
/// sizes are capped at 32 states per side.
struct KStepCouplingChain {
  int k = 1;
  int n = 0, m = 0;
  std::vector<std::vector<Matrix>> layers;
  std::vector<Matrix> composed;

  const Matrix& composed_at(int x, int y) const { return composed[static_cast<size_t>(x) * m + y]; }
};

/// layer_fn(layer, x, y) must return a coupling between kernel rows x and y.
using CouplingLayerFn = std::function<Matrix(int layer, int x, int y)>;

/// Builds and validates a chain from per-layer couplings: every layer entry
/// must have marginals (m_x, m_y) within kCouplingTol, and the composed maps
/// must couple the k-step kernel rows within 1e-6.
KStepCouplingChain make_kstep_chain(const MarkovKernel& mx, const MarkovKernel& my, int k,
                                    const CouplingLayerFn& layer_fn);

/// Chain whose 1-step layers are all product couplings (always feasible).
KStepCouplingChain make_product_kstep(const MarkovKernel& mx, const MarkovKernel& my, int k);

/// Chain that composes to the diagonal on a chain paired with itself:
/// layer(x, x) is the diagonal coupling of row x, layer(x, x') the product.
KStepCouplingChain make_diagonal_kstep(const MarkovKernel& m, int k);

/// nu (.) gamma: the coupling obtained by averaging the composed maps
/// against gamma.
Matrix compose_with(const KStepCouplingChain& nu, const Matrix& gamma);

/// Average distance from each state under the stationary measure; a stable
/// label invariant.
Matrix eccentricity(const Mcms& m);

/// Expected distance between two independent stationary samples.
double diameter(const Mcms& m);

/// |diameter(mx) - diameter(my)|, a lower bound for the k-distortion
/// objective at every k.
double diameter_lb(const Mcms& mx, const Mcms& my);

/// Lower bound built from depth-k distances between the chains labeled by
/// distance-to-a-point: entry (i,j) of the outer cost is the depth-k distance
/// between (X, d_X(x_i, .)) and (Y, d_Y(y_j, .)). Costs n*m full depth-k
/// computations; k = 1 is the cheapest valid choice (the bound is weakest
/// there). For constant-kernel chains the value is independent of k and
/// equals the classical third lower bound.
double tlb_lower_bound(const Mcms& mx, const Mcms& my, int k, int jobs = 1);

/// Exact k-distortion of a feasible pair (gamma, nu): the expected metric
/// discrepancy |d_X(x,x') - d_Y(y,y')| with (x,y) drawn from gamma and
/// (x',y') from nu composed against gamma.
double distortion_k(const Mcms& mx, const Mcms& my, const Coupling& gamma,
                    const KStepCouplingChain& nu);

}  // namespace wlmc

#endif  // WLMC_GW_HPP
