#ifndef WLMC_MCNN_HPP
#define WLMC_MCNN_HPP

#include "wlmc/core.hpp"

#include <string>
#include <vector>

namespace wlmc {

enum class Nonlinearity { Identity, Abs, Relu };

/// Affine map followed by an optional componentwise 1-Lipschitz nonlinearity.
/// The certified Lipschitz bound is the operator norm of the weight; the true
/// constant never exceeds it.
struct LipschitzMap {
  Matrix weight;  // out x in
  Vector bias;    // out
  Nonlinearity nonlinearity = Nonlinearity::Identity;

  int in_dim() const { return static_cast<int>(weight.cols()); }
  int out_dim() const { return static_cast<int>(weight.rows()); }
  Vector operator()(const Vector& x) const;
  double lipschitz_bound() const;

  static LipschitzMap identity(int dim);
};

/// k propagation layers, an averaging readout, and a scalar head. Adjacent
/// dimensions must compose.
struct McnnSpec {
  std::vector<LipschitzMap> layers;
  LipschitzMap readout_phi;
  LipschitzMap readout_psi;  // must map to R; no Lipschitz contract
};

void check_spec(const McnnSpec& spec, int input_dim);

/// Mean of phi over the weighted points: sum_i w_i phi(points row i).
Vector q_phi(const LipschitzMap& phi, const ProbVec& weights, const Matrix& points);

/// Relabels each state by the phi-average of its step distribution; kernel
/// and stationary measure are untouched.
Lmmc apply_F(const LipschitzMap& phi, const Lmmc& x);

/// The readout vector before the scalar head: q_{phi_{k+1}} applied to the
/// stationary pushforward after all propagation layers.
Vector mcnn_embed(const McnnSpec& spec, const Lmmc& x);

/// Full forward pass: psi(embed).
double mcnn_forward(const McnnSpec& spec, const Lmmc& x);

/// Parallel composition: runs both specs side by side on a shared input.
/// Layer l becomes the block map (a.layer_l x b.layer_l) acting on stacked
/// labels; the embed vector is the concatenation of the two component
/// embeds. Layer counts and nonlinearities must agree.
McnnSpec combine_specs(const McnnSpec& a, const McnnSpec& b);

/// JSON round trip; weight matrices are stored row-major.
std::string mcnn_to_json(const McnnSpec& spec);
McnnSpec mcnn_from_json(const std::string& text);

}  // namespace wlmc

#endif  // WLMC_MCNN_HPP
