#include "wlmc/wl.hpp"

#include "wlmc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace wlmc {

CostMatrix cost_matrix_depth0(const Lmmc& x, const Lmmc& y) {
  if (x.label_dim() != y.label_dim()) {
    throw ValidationError(Errc::LabelDimMismatch, "label dimensions differ");
  }
  Matrix entries(x.size(), y.size());
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < y.size(); ++j)
      entries(i, j) = (x.labels().row(i) - y.labels().row(j)).norm();
  return CostMatrix{std::move(entries), 0};
}

CostMatrix lift_cost(const CostMatrix& prev, const Lmmc& x, const Lmmc& y, int jobs) {
  const int n = x.size(), m = y.size();
  if (prev.entries.rows() != n || prev.entries.cols() != m) {
    throw ValidationError(Errc::ShapeMismatch, "cost matrix shape does not match the chains");
  }
  Matrix lifted(n, m);
  util::parallel_for(static_cast<std::int64_t>(n) * m, jobs, [&](std::int64_t idx) {
    const int i = static_cast<int>(idx / m), j = static_cast<int>(idx % m);
    lifted(i, j) = detail::transport_value(prev.entries, x.kernel().row(i), y.kernel().row(j));
  });
  return CostMatrix{std::move(lifted), prev.depth + 1};
}

double wl_distance(const Lmmc& x, const Lmmc& y, int k, int jobs) {
  if (k < 0) throw ValidationError(Errc::InvalidArgument, "depth must be >= 0");
  CostMatrix c = cost_matrix_depth0(x, y);
  for (int level = 0; level < k; ++level) c = lift_cost(c, x, y, jobs);
  return detail::transport_value(c.entries, x.stationary().weights(), y.stationary().weights());
}

KStepKernel kstep_kernel(const MarkovKernel& kernel, int k) {
  if (k < 1) throw ValidationError(Errc::InvalidArgument, "kernel power needs k >= 1");
  const int n = kernel.size();
  Matrix result = Matrix::Identity(n, n);
  Matrix base = kernel.matrix();
  int e = k;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return KStepKernel{std::move(result), k};
}

namespace {

// Ground cost between the label pushforwards of two kernel rows. For scalar
// labels the supports are fixed, so sort them once and walk the quantile
// functions per pair.
struct GroundCost {
  GroundCost(const Lmmc& x, const Lmmc& y)
      : scalar(x.label_dim() == 1), xs(x.size()), ys(y.size()) {
    if (scalar) {
      auto sorted_order = [](const Matrix& labels) {
        std::vector<int> idx(labels.rows());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return labels(a, 0) < labels(b, 0); });
        return idx;
      };
      order_x = sorted_order(x.labels());
      order_y = sorted_order(y.labels());
      px.resize(xs);
      py.resize(ys);
      for (int i = 0; i < xs; ++i) px[i] = x.labels()(order_x[i], 0);
      for (int j = 0; j < ys; ++j) py[j] = y.labels()(order_y[j], 0);
    } else {
      depth0 = cost_matrix_depth0(x, y).entries;
    }
  }

  double operator()(const Vector& wx, const Vector& wy) const {
    if (!scalar) return detail::transport_value(depth0, wx, wy);
    double total = 0.0;
    int i = 0, j = 0;
    double ra = wx[order_x[0]], rb = wy[order_y[0]];
    while (i < xs && j < ys) {
      const double step = std::min(ra, rb);
      total += step * std::abs(px[i] - py[j]);
      ra -= step;
      rb -= step;
      if (ra <= 0.0 && ++i < xs) ra = wx[order_x[i]];
      if (rb <= 0.0 && ++j < ys) rb = wy[order_y[j]];
    }
    return total;
  }

  bool scalar;
  int xs, ys;
  std::vector<int> order_x, order_y;
  std::vector<double> px, py;
  Matrix depth0;
};

}  // namespace

double wllb_distance(const Lmmc& x, const Lmmc& y, int k) {
  if (k < 1) throw ValidationError(Errc::InvalidArgument, "lower bound needs k >= 1");
  if (x.label_dim() != y.label_dim()) {
    throw ValidationError(Errc::LabelDimMismatch, "label dimensions differ");
  }
  const KStepKernel mx = kstep_kernel(x.kernel(), k);
  const KStepKernel my = kstep_kernel(y.kernel(), k);
  const GroundCost ground(x, y);
  Matrix costs(x.size(), y.size());
  for (int i = 0; i < x.size(); ++i) {
    const Vector wx = mx.rows.row(i);
    for (int j = 0; j < y.size(); ++j) costs(i, j) = ground(wx, my.rows.row(j));
  }
  return detail::transport_value(costs, x.stationary().weights(), y.stationary().weights());
}

SupResult wl_distance_sup(const Lmmc& x, const Lmmc& y, int jobs) {
  const int kmax = x.size() + y.size();
  CostMatrix c = cost_matrix_depth0(x, y);
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) c = lift_cost(c, x, y, jobs);
    const double value =
        detail::transport_value(c.entries, x.stationary().weights(), y.stationary().weights());
    if (value > kZeroDistance) return SupResult{value, k};
  }
  return SupResult{0.0, kmax};
}

}  // namespace wlmc
