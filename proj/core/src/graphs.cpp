#include "wlmc/graphs.hpp"

#include "wlmc/ot.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace wlmc {

LabeledGraph make_graph(int n, std::vector<std::pair<int, int>> edges, Matrix labels) {
  if (n <= 0) throw ValidationError(Errc::InvalidArgument, "graph needs at least one vertex");
  LabeledGraph g;
  g.n = n;
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) {
      std::ostringstream os;
      os << "edge (" << u << "," << v << ") references a missing vertex";
      throw ValidationError(Errc::InvalidEdge, os.str());
    }
    if (u == v) {
      throw ValidationError(Errc::InvalidEdge, "self-loops are not allowed");
    }
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) {
      std::ostringstream os;
      os << "duplicate edge (" << u << "," << v << ")";
      throw ValidationError(Errc::InvalidEdge, os.str());
    }
  }
  g.edges.assign(seen.begin(), seen.end());
  g.adj.resize(n);
  for (auto [u, v] : g.edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& list : g.adj) std::sort(list.begin(), list.end());
  if (labels.size() == 0) {
    g.labels = Matrix::Constant(n, 1, 1.0);
  } else {
    if (labels.rows() != n) {
      throw ValidationError(Errc::ShapeMismatch, "label row count != vertex count");
    }
    check_labels(labels);
    g.labels = std::move(labels);
  }
  return g;
}

Lmmc graph_to_lmmc(const LabeledGraph& g, double q) {
  if (q < 0.0 || q >= 1.0) {
    throw ValidationError(Errc::InvalidArgument, "q must lie in [0, 1)");
  }
  Matrix kernel = Matrix::Zero(g.n, g.n);
  Vector stationary(g.n);
  double total = 0.0;
  for (int v = 0; v < g.n; ++v) {
    const int deg = g.degree(v);
    if (deg == 0) {
      kernel(v, v) = 1.0;
    } else {
      kernel(v, v) = q;
      for (const int w : g.adj[v]) kernel(v, w) = (1.0 - q) / deg;
    }
    stationary[v] = std::max(deg, 1);
    total += stationary[v];
  }
  stationary /= total;
  return Lmmc(MarkovKernel(std::move(kernel)), ProbVec(std::move(stationary)), g.labels);
}

LabeledGraph relabel(const LabeledGraph& g, RelabelScheme scheme) {
  LabeledGraph out = g;
  if (scheme == RelabelScheme::ScalarF2) {
    out.labels.resize(g.n, 1);
    for (int v = 0; v < g.n; ++v) out.labels(v, 0) = g.degree(v) + 1.0 / g.n;
  } else {
    const int d = g.label_dim();
    out.labels.resize(g.n, d + 2);
    for (int v = 0; v < g.n; ++v) {
      out.labels.row(v).head(d) = g.labels.row(v);
      out.labels(v, d) = g.degree(v);
      out.labels(v, d + 1) = 1.0 / g.n;
    }
  }
  return out;
}

namespace {

// Initial colors from exact equality of label rows, interned across both
// graphs so ids are comparable.
std::pair<std::vector<int>, std::vector<int>> initial_colors(const LabeledGraph& g1,
                                                             const LabeledGraph& g2) {
  std::map<std::vector<double>, int> intern;
  auto color_of = [&](const Matrix& labels, int v) {
    std::vector<double> key(labels.cols());
    for (int c = 0; c < labels.cols(); ++c) key[c] = labels(v, c);
    return intern.emplace(std::move(key), static_cast<int>(intern.size())).first->second;
  };
  std::vector<int> c1(g1.n), c2(g2.n);
  for (int v = 0; v < g1.n; ++v) c1[v] = color_of(g1.labels, v);
  for (int v = 0; v < g2.n; ++v) c2[v] = color_of(g2.labels, v);
  return {std::move(c1), std::move(c2)};
}

std::vector<int> refine(const LabeledGraph& g, const std::vector<int>& colors,
                        std::map<std::pair<int, std::vector<int>>, int>& intern) {
  std::vector<int> next(g.n);
  for (int v = 0; v < g.n; ++v) {
    std::vector<int> neighborhood;
    neighborhood.reserve(g.adj[v].size());
    for (const int w : g.adj[v]) neighborhood.push_back(colors[w]);
    std::sort(neighborhood.begin(), neighborhood.end());
    std::pair<int, std::vector<int>> key{colors[v], std::move(neighborhood)};
    next[v] = intern.emplace(std::move(key), static_cast<int>(intern.size())).first->second;
  }
  return next;
}

bool same_multiset(std::vector<int> a, std::vector<int> b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

int distinct_count(const std::vector<int>& a, const std::vector<int>& b) {
  std::set<int> ids(a.begin(), a.end());
  ids.insert(b.begin(), b.end());
  return static_cast<int>(ids.size());
}

}  // namespace

std::pair<WlColoring, WlColoring> wl_colorings(const LabeledGraph& g1, const LabeledGraph& g2,
                                               int rounds) {
  WlColoring a, b;
  auto [c1, c2] = initial_colors(g1, g2);
  a.rounds.push_back(c1);
  b.rounds.push_back(c2);
  for (int r = 1; r <= rounds; ++r) {
    std::map<std::pair<int, std::vector<int>>, int> intern;
    c1 = refine(g1, a.rounds.back(), intern);
    c2 = refine(g2, b.rounds.back(), intern);
    a.rounds.push_back(c1);
    b.rounds.push_back(c2);
  }
  return {std::move(a), std::move(b)};
}

WlTestResult wl_test(const LabeledGraph& g1, const LabeledGraph& g2, int max_rounds) {
  if (max_rounds < 0) max_rounds = g1.n + g2.n;
  auto [c1, c2] = initial_colors(g1, g2);
  if (!same_multiset(c1, c2)) return {true, 0};
  int classes = distinct_count(c1, c2);
  for (int r = 1; r <= max_rounds; ++r) {
    std::map<std::pair<int, std::vector<int>>, int> intern;
    c1 = refine(g1, c1, intern);
    c2 = refine(g2, c2, intern);
    if (!same_multiset(c1, c2)) return {true, r};
    const int refined = distinct_count(c1, c2);
    if (refined == classes) break;  // partition is stable, nothing more can split
    classes = refined;
  }
  return {false, -1};
}

Matrix wwl_labels(const LabeledGraph& g, int k) {
  if (k < 0) throw ValidationError(Errc::InvalidArgument, "rounds must be >= 0");
  for (int v = 0; v < g.n; ++v) {
    if (g.degree(v) == 0) {
      std::ostringstream os;
      os << "vertex " << v << " is isolated";
      throw ValidationError(Errc::IsolatedVertex, os.str());
    }
  }
  const int d = g.label_dim();
  Matrix stacked(g.n, d * (k + 1));
  Matrix current = g.labels;
  stacked.leftCols(d) = current;
  for (int stage = 1; stage <= k; ++stage) {
    Matrix next(g.n, d);
    for (int v = 0; v < g.n; ++v) {
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(d);
      for (const int w : g.adj[v]) mean += current.row(w);
      mean /= g.degree(v);
      next.row(v) = 0.5 * (current.row(v) + mean);
    }
    current = std::move(next);
    stacked.middleCols(stage * d, d) = current;
  }
  return stacked;
}

double wwl_hat_distance(const LabeledGraph& g1, const LabeledGraph& g2, int k) {
  if (g1.label_dim() != g2.label_dim()) {
    throw ValidationError(Errc::LabelDimMismatch, "label dimensions differ");
  }
  const Matrix s1 = wwl_labels(g1, k);
  const Matrix s2 = wwl_labels(g2, k);
  Matrix cost(g1.n, g2.n);
  for (int i = 0; i < g1.n; ++i)
    for (int j = 0; j < g2.n; ++j) cost(i, j) = (s1.row(i) - s2.row(j)).norm();
  // Degree stationary measures; q plays no role here.
  const Lmmc x = graph_to_lmmc(g1, 0.0);
  const Lmmc y = graph_to_lmmc(g2, 0.0);
  return detail::transport_value(cost, x.stationary().weights(), y.stationary().weights());
}

}  // namespace wlmc
