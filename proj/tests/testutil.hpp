#ifndef WLMC_TESTUTIL_HPP
#define WLMC_TESTUTIL_HPP

#include "wlmc/core.hpp"
#include "wlmc/graphs.hpp"
#include "wlmc/ot.hpp"

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

namespace wlmc::testutil {

using Rng = std::mt19937_64;

inline Vector random_prob_vector(Rng& rng, int n, bool allow_zeros = false) {
  std::uniform_real_distribution<double> uni(allow_zeros ? 0.0 : 0.05, 1.0);
  Vector w(n);
  for (int i = 0; i < n; ++i) w[i] = uni(rng);
  if (allow_zeros) {
    std::bernoulli_distribution zero(0.25);
    bool any = false;
    for (int i = 0; i < n; ++i) {
      if (n > 1 && zero(rng)) w[i] = 0.0;
      any = any || w[i] > 0.0;
    }
    if (!any) w[0] = 1.0;
  }
  return w / w.sum();
}

inline Matrix random_stochastic(Rng& rng, int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.row(i) = random_prob_vector(rng, n).transpose();
  return m;
}

inline Matrix random_labels(Rng& rng, int n, int d, double scale = 2.0) {
  std::uniform_real_distribution<double> uni(-scale, scale);
  Matrix labels(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) labels(i, j) = uni(rng);
  return labels;
}

inline Lmmc random_lmmc(Rng& rng, int n, int d = 1) {
  MarkovKernel kernel(random_stochastic(rng, n));
  ProbVec mu = stationary_of(kernel);
  return Lmmc(kernel, mu, random_labels(rng, n, d));
}

/// Euclidean metric over random distinct planar points.
inline Mcms random_mcms(Rng& rng, int n) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Matrix points(n, 2);
  for (int i = 0; i < n; ++i) {
    points(i, 0) = uni(rng);
    points(i, 1) = uni(rng) + 3.0 * i;  // spread rows out so distances stay positive
  }
  Matrix metric(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) metric(i, j) = (points.row(i) - points.row(j)).norm();
  MarkovKernel kernel(random_stochastic(rng, n));
  ProbVec mu = stationary_of(kernel);
  return Mcms(kernel, mu, metric);
}

/// Connected-ish random simple graph (each edge kept with probability p; a
/// random spanning path guarantees no isolated vertices when connect=true).
inline LabeledGraph random_graph(Rng& rng, int n, double p = 0.4, bool connect = true,
                                 int label_values = 0) {
  std::vector<std::pair<int, int>> edges;
  std::bernoulli_distribution keep(p);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (keep(rng)) edges.emplace_back(u, v);
  if (connect && n > 1) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i + 1 < n; ++i) {
      int u = order[i], v = order[i + 1];
      if (u > v) std::swap(u, v);
      edges.emplace_back(u, v);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Matrix labels;
  if (label_values > 0) {
    std::uniform_int_distribution<int> pick(0, label_values - 1);
    labels.resize(n, 1);
    for (int v = 0; v < n; ++v) labels(v, 0) = pick(rng);
  }
  return make_graph(n, std::move(edges), std::move(labels));
}

inline LabeledGraph permute_graph(Rng& rng, const LabeledGraph& g) {
  std::vector<int> perm(g.n);
  for (int i = 0; i < g.n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edges.size());
  for (auto [u, v] : g.edges) edges.emplace_back(perm[u], perm[v]);
  Matrix labels(g.n, g.label_dim());
  for (int v = 0; v < g.n; ++v) labels.row(perm[v]) = g.labels.row(v);
  return make_graph(g.n, std::move(edges), std::move(labels));
}

inline Lmmc permute_lmmc(Rng& rng, const Lmmc& x) {
  const int n = x.size();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix kernel(n, n);
  Vector mu(n);
  Matrix labels(n, x.label_dim());
  for (int i = 0; i < n; ++i) {
    mu[perm[i]] = x.stationary()[i];
    labels.row(perm[i]) = x.labels().row(i);
    for (int j = 0; j < n; ++j) kernel(perm[i], perm[j]) = x.kernel().matrix()(i, j);
  }
  return Lmmc(MarkovKernel(std::move(kernel)), ProbVec(std::move(mu)), std::move(labels));
}

/// A random point of the transportation polytope: convex mix of greedy
/// vertices built over shuffled row/column orders.
inline Matrix random_coupling(Rng& rng, const Vector& a, const Vector& b, int mixtures = 3) {
  const int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
  Matrix total = Matrix::Zero(n, m);
  std::vector<double> coeffs(mixtures);
  double coeff_sum = 0.0;
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  for (double& c : coeffs) {
    c = uni(rng);
    coeff_sum += c;
  }
  for (int t = 0; t < mixtures; ++t) {
    std::vector<int> rows(n), cols(m);
    for (int i = 0; i < n; ++i) rows[i] = i;
    for (int j = 0; j < m; ++j) cols[j] = j;
    std::shuffle(rows.begin(), rows.end(), rng);
    std::shuffle(cols.begin(), cols.end(), rng);
    Matrix plan = Matrix::Zero(n, m);
    Vector ra = a, rb = b;
    int i = 0, j = 0;
    while (i < n && j < m) {
      const double step = std::min(ra[rows[i]], rb[cols[j]]);
      plan(rows[i], cols[j]) += step;
      ra[rows[i]] -= step;
      rb[cols[j]] -= step;
      if (ra[rows[i]] <= 1e-15) ++i;
      else ++j;
    }
    total += (coeffs[t] / coeff_sum) * plan;
  }
  return total;
}

/// Product of the two graphs' label multisets differ => easy sanity anchor.
inline LabeledGraph path_graph(int n, Matrix labels = {}) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return make_graph(n, std::move(edges), std::move(labels));
}

inline LabeledGraph star_graph(int leaves, Matrix labels = {}) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return make_graph(leaves + 1, std::move(edges), std::move(labels));
}

/// The separating family: a 0-labeled path of n+2 vertices with one +1 and
/// one -1 pendant on each interior vertex, against a star whose center is
/// 0-labeled with n+1 zero leaves, n +1 leaves and n -1 leaves. Both have
/// 3n+2 vertices and 3n+1 edges; the half-averaging refinement cannot tell
/// them apart while the depth-1 distance can.
inline std::pair<LabeledGraph, LabeledGraph> separating_family(int n) {
  const int total = 3 * n + 2;
  std::vector<std::pair<int, int>> e1;
  Matrix l1 = Matrix::Zero(total, 1);
  for (int i = 0; i + 1 < n + 2; ++i) e1.emplace_back(i, i + 1);
  int next = n + 2;
  for (int i = 1; i <= n; ++i) {
    e1.emplace_back(i, next);
    l1(next++, 0) = 1.0;
    e1.emplace_back(i, next);
    l1(next++, 0) = -1.0;
  }
  LabeledGraph g1 = make_graph(total, std::move(e1), std::move(l1));

  std::vector<std::pair<int, int>> e2;
  Matrix l2 = Matrix::Zero(total, 1);
  for (int v = 1; v < total; ++v) e2.emplace_back(0, v);
  for (int i = 0; i < n; ++i) {
    l2(n + 2 + i, 0) = 1.0;
    l2(2 * n + 2 + i, 0) = -1.0;
  }
  LabeledGraph g2 = make_graph(total, std::move(e2), std::move(l2));
  return {std::move(g1), std::move(g2)};
}

/// Claw vs 4-path with constant labels: the refinement test separates them,
/// the distance hierarchy cannot.
inline std::pair<LabeledGraph, LabeledGraph> claw_vs_path() {
  return {star_graph(3), path_graph(4)};
}

/// One edge vs two disjoint edges, degree labels (all ones).
inline std::pair<LabeledGraph, LabeledGraph> edge_vs_two_edges() {
  LabeledGraph g1 = make_graph(2, {{0, 1}});
  LabeledGraph g2 = make_graph(4, {{0, 1}, {2, 3}});
  for (int v = 0; v < g1.n; ++v) g1.labels(v, 0) = g1.degree(v);
  for (int v = 0; v < g2.n; ++v) g2.labels(v, 0) = g2.degree(v);
  return {std::move(g1), std::move(g2)};
}

}  // namespace wlmc::testutil

#endif  // WLMC_TESTUTIL_HPP
