#include "wlmc/ot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

namespace wlmc {

namespace {

void check_cost(const Matrix& cost, int n, int m) {
  if (cost.rows() != n || cost.cols() != m) {
    throw ValidationError(Errc::DimensionMismatch, "cost shape does not match marginals");
  }
  if (!cost.allFinite() || cost.minCoeff() < 0.0) {
    throw ValidationError(Errc::InvalidArgument, "cost entries must be finite and >= 0");
  }
}

// Dense transportation simplex (MODI with a spanning-tree basis).
//
// Nodes 0..n-1 are supplies, n..n+m-1 demands; basic cells form a spanning
// tree. Starts from the north-west corner staircase, pivots on the most
// negative reduced cost, and falls back to Bland's rule if a long run of
// degenerate pivots suggests stalling. Potentials are recomputed from the
// tree each pivot, so reduced costs never accumulate drift.
class TransportSimplex {
 public:
  TransportSimplex(const Matrix& cost, const Vector& supply, const Vector& demand)
      : c_(cost),
        n_(static_cast<int>(supply.size())),
        m_(static_cast<int>(demand.size())),
        nodes_(n_ + m_),
        a_(supply),
        b_(demand),
        flow_(static_cast<size_t>(n_) * m_, 0.0),
        basic_(static_cast<size_t>(n_) * m_, 0),
        adj_(nodes_),
        u_(n_),
        v_(m_) {
    // Exactly balance the two sides; the inputs agree within kProbTol.
    a_ *= 1.0 / a_.sum();
    b_ *= 1.0 / b_.sum();
    tol_ = 1e-12 * std::max(1.0, c_.cwiseAbs().maxCoeff());
  }

  void run() {
    northwest_corner();
    rebuild_adjacency();
    const long hard_cap = 4000000L + 400L * nodes_ * nodes_;
    bool bland = false;
    int degenerate_streak = 0;
    for (long pivots = 0;; ++pivots) {
      if (pivots > hard_cap) {
        throw ValidationError(Errc::NoConvergence, "transport simplex exceeded pivot cap");
      }
      compute_potentials();
      const int entering = bland ? find_entering_bland() : find_entering_dantzig();
      if (entering < 0) break;
      const double theta = pivot(entering);
      if (theta <= 1e-15) {
        if (++degenerate_streak > nodes_ + 8) bland = true;
      } else {
        degenerate_streak = 0;
      }
    }
  }

  double value() const {
    double total = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < m_; ++j)
        if (basic_[cell(i, j)]) total += flow_[cell(i, j)] * c_(i, j);
    return total;
  }

  void fill_plan(Matrix& plan, const std::vector<int>& row_ids,
                 const std::vector<int>& col_ids) const {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < m_; ++j)
        if (basic_[cell(i, j)] && flow_[cell(i, j)] > 0.0)
          plan(row_ids[i], col_ids[j]) = flow_[cell(i, j)];
  }

 private:
  size_t cell(int i, int j) const { return static_cast<size_t>(i) * m_ + j; }

  void northwest_corner() {
    int i = 0, j = 0;
    double rs = a_[0], cs = b_[0];
    while (true) {
      const double t = std::max(0.0, std::min(rs, cs));
      flow_[cell(i, j)] = t;
      basic_[cell(i, j)] = 1;
      rs -= t;
      cs -= t;
      if (i == n_ - 1 && j == m_ - 1) break;
      bool down;
      if (i == n_ - 1) down = false;
      else if (j == m_ - 1) down = true;
      else down = rs <= cs;
      if (down) {
        ++i;
        rs = a_[i];
      } else {
        ++j;
        cs = b_[j];
      }
    }
  }

  void rebuild_adjacency() {
    for (auto& list : adj_) list.clear();
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < m_; ++j)
        if (basic_[cell(i, j)]) {
          adj_[i].push_back(static_cast<int>(cell(i, j)));
          adj_[n_ + j].push_back(static_cast<int>(cell(i, j)));
        }
  }

  void compute_potentials() {
    std::vector<char> seen(nodes_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    u_[0] = 0.0;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (const int id : adj_[node]) {
        const int i = id / m_, j = id % m_;
        const int other = (node < n_) ? n_ + j : i;
        if (seen[other]) continue;
        seen[other] = 1;
        if (other >= n_) v_[j] = c_(i, j) - u_[i];
        else u_[i] = c_(i, j) - v_[j];
        stack.push_back(other);
      }
    }
  }

  // Block pricing: sweep cells in a rotating window and take the most
  // negative reduced cost from the first window that has one. Any negative
  // arc keeps the simplex exact; this just avoids pricing every cell on
  // every pivot.
  int find_entering_dantzig() {
    const int cells = n_ * m_;
    const int block = std::max(64, cells / 8);
    int scanned = 0;
    int pos = scan_start_;
    while (scanned < cells) {
      int best = -1;
      double best_r = -tol_;
      const int limit = std::min(block, cells - scanned);
      for (int step = 0; step < limit; ++step) {
        const int id = pos;
        pos = pos + 1 == cells ? 0 : pos + 1;
        if (basic_[id]) continue;
        const int i = id / m_, j = id % m_;
        const double r = c_(i, j) - u_[i] - v_[j];
        if (r < best_r) {
          best_r = r;
          best = id;
        }
      }
      scanned += limit;
      if (best >= 0) {
        scan_start_ = pos;
        return best;
      }
    }
    return -1;
  }

  int find_entering_bland() const {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < m_; ++j) {
        const size_t id = cell(i, j);
        if (!basic_[id] && c_(i, j) - u_[i] - v_[j] < -tol_) return static_cast<int>(id);
      }
    return -1;
  }

  // Adds the entering cell, walks the unique tree cycle, moves theta around
  // it and drops the blocking cell. Returns theta.
  double pivot(int entering) {
    const int ei = entering / m_, ej = entering % m_;
    // Tree path from row node ei to column node n_+ej.
    std::vector<int> pred_node(nodes_, -1), pred_cell(nodes_, -1);
    {
      std::vector<int> stack{ei};
      pred_node[ei] = ei;
      while (!stack.empty()) {
        const int node = stack.back();
        stack.pop_back();
        if (node == n_ + ej) break;
        for (const int id : adj_[node]) {
          const int i = id / m_, j = id % m_;
          const int other = (node < n_) ? n_ + j : i;
          if (pred_node[other] >= 0) continue;
          pred_node[other] = node;
          pred_cell[other] = id;
          stack.push_back(other);
        }
      }
    }
    if (pred_node[n_ + ej] < 0) {
      throw ValidationError(Errc::NoConvergence, "transport basis lost connectivity");
    }
    // Collect path cells from the ej side back to ei; path length is odd, the
    // cells adjacent to the entering cell's row and column both lose flow.
    std::vector<int> path;
    for (int node = n_ + ej; node != ei; node = pred_node[node]) path.push_back(pred_cell[node]);
    std::reverse(path.begin(), path.end());

    double theta = std::numeric_limits<double>::infinity();
    int leaving = -1;
    for (size_t t = 0; t < path.size(); t += 2) {  // minus positions
      const double f = flow_[path[t]];
      if (f < theta || (f == theta && path[t] < leaving)) {
        theta = f;
        leaving = path[t];
      }
    }
    theta = std::max(0.0, theta);

    for (size_t t = 0; t < path.size(); ++t) {
      if (t % 2 == 0) flow_[path[t]] -= theta;
      else flow_[path[t]] += theta;
    }
    flow_[entering] = theta;
    basic_[entering] = 1;
    basic_[leaving] = 0;
    flow_[leaving] = 0.0;

    drop_from_adjacency(leaving);
    adj_[entering / m_].push_back(entering);
    adj_[n_ + entering % m_].push_back(entering);
    return theta;
  }

  void drop_from_adjacency(int id) {
    auto erase = [&](std::vector<int>& list) {
      list.erase(std::find(list.begin(), list.end(), id));
    };
    erase(adj_[id / m_]);
    erase(adj_[n_ + id % m_]);
  }

  const Matrix& c_;
  int n_, m_, nodes_;
  Vector a_, b_;
  std::vector<double> flow_;
  std::vector<char> basic_;
  std::vector<std::vector<int>> adj_;
  std::vector<double> u_, v_;
  double tol_ = 0.0;
  int scan_start_ = 0;
};

struct Stripped {
  Matrix cost;
  Vector supply, demand;
  std::vector<int> row_ids, col_ids;
};

// Zero-mass rows and columns carry no flow; dropping them up front removes
// the worst degeneracies.
Stripped strip_zeros(const Matrix& cost, const Vector& supply, const Vector& demand) {
  Stripped s;
  for (int i = 0; i < supply.size(); ++i)
    if (supply[i] > 0.0) s.row_ids.push_back(i);
  for (int j = 0; j < demand.size(); ++j)
    if (demand[j] > 0.0) s.col_ids.push_back(j);
  const int n = static_cast<int>(s.row_ids.size());
  const int m = static_cast<int>(s.col_ids.size());
  s.cost.resize(n, m);
  s.supply.resize(n);
  s.demand.resize(m);
  for (int i = 0; i < n; ++i) {
    s.supply[i] = supply[s.row_ids[i]];
    for (int j = 0; j < m; ++j) s.cost(i, j) = cost(s.row_ids[i], s.col_ids[j]);
  }
  for (int j = 0; j < m; ++j) s.demand[j] = demand[s.col_ids[j]];
  return s;
}

}  // namespace

Coupling::Coupling(Matrix plan_in, ProbVec source_in, ProbVec target_in)
    : plan(std::move(plan_in)), source(std::move(source_in)), target(std::move(target_in)) {
  if (plan.rows() != source.size() || plan.cols() != target.size()) {
    throw ValidationError(Errc::DimensionMismatch, "coupling shape does not match marginals");
  }
  if (plan.minCoeff() < 0.0) {
    throw ValidationError(Errc::MarginalMismatch, "coupling has negative mass");
  }
  const double row_err =
      (plan.rowwise().sum() - source.weights()).lpNorm<Eigen::Infinity>();
  const double col_err =
      (plan.colwise().sum().transpose() - target.weights()).lpNorm<Eigen::Infinity>();
  if (row_err > kCouplingTol || col_err > kCouplingTol) {
    std::ostringstream os;
    os << "marginal residuals " << row_err << ", " << col_err;
    throw ValidationError(Errc::MarginalMismatch, os.str());
  }
}

double wasserstein_1d(std::span<const double> a_points, const ProbVec& a_weights,
                      std::span<const double> b_points, const ProbVec& b_weights) {
  if (a_points.empty() || b_points.empty()) {
    throw ValidationError(Errc::EmptyDistribution, "1-d Wasserstein needs nonempty supports");
  }
  if (static_cast<int>(a_points.size()) != a_weights.size() ||
      static_cast<int>(b_points.size()) != b_weights.size()) {
    throw ValidationError(Errc::DimensionMismatch, "points and weights differ in length");
  }
  for (const double p : a_points)
    if (!std::isfinite(p)) throw ValidationError(Errc::InvalidArgument, "non-finite support point");
  for (const double p : b_points)
    if (!std::isfinite(p)) throw ValidationError(Errc::InvalidArgument, "non-finite support point");

  auto order_of = [](std::span<const double> pts) {
    std::vector<int> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int x, int y) { return pts[x] < pts[y]; });
    return idx;
  };
  const std::vector<int> ia = order_of(a_points), ib = order_of(b_points);

  // Walk the two quantile functions in lockstep.
  double total = 0.0;
  size_t i = 0, j = 0;
  double ra = a_weights[ia[0]], rb = b_weights[ib[0]];
  while (i < ia.size() && j < ib.size()) {
    const double step = std::min(ra, rb);
    total += step * std::abs(a_points[ia[i]] - b_points[ib[j]]);
    ra -= step;
    rb -= step;
    if (ra <= 0.0) {
      ++i;
      if (i < ia.size()) ra = a_weights[ia[i]];
    }
    if (rb <= 0.0) {
      ++j;
      if (j < ib.size()) rb = b_weights[ib[j]];
    }
  }
  return total;
}

namespace detail {

double transport_value(const Matrix& cost, const Vector& source, const Vector& target) {
  Stripped s = strip_zeros(cost, source, target);
  if (s.row_ids.empty() || s.col_ids.empty()) {
    throw ValidationError(Errc::InfeasibleMarginals, "marginal with no mass");
  }
  TransportSimplex simplex(s.cost, s.supply, s.demand);
  simplex.run();
  return simplex.value();
}

Matrix transport_plan(const Matrix& cost, const Vector& source, const Vector& target,
                      double* value_out) {
  Stripped s = strip_zeros(cost, source, target);
  if (s.row_ids.empty() || s.col_ids.empty()) {
    throw ValidationError(Errc::InfeasibleMarginals, "marginal with no mass");
  }
  TransportSimplex simplex(s.cost, s.supply, s.demand);
  simplex.run();
  Matrix plan = Matrix::Zero(source.size(), target.size());
  simplex.fill_plan(plan, s.row_ids, s.col_ids);
  if (value_out) *value_out = simplex.value();
  return plan;
}

}  // namespace detail

OtResult ot_solve(const Matrix& cost, const ProbVec& source, const ProbVec& target) {
  check_cost(cost, source.size(), target.size());
  double value = 0.0;
  Matrix plan = detail::transport_plan(cost, source.weights(), target.weights(), &value);
  // Report the cost of the plan actually returned.
  value = (cost.array() * plan.array()).sum();
  return OtResult{value, Coupling(std::move(plan), source, target)};
}

double ot_value(const Matrix& cost, const ProbVec& source, const ProbVec& target) {
  check_cost(cost, source.size(), target.size());
  return detail::transport_value(cost, source.weights(), target.weights());
}

double lp_vertex_oracle(const Matrix& cost, const ProbVec& source, const ProbVec& target) {
  const int n = source.size(), m = target.size();
  check_cost(cost, n, m);
  if (static_cast<long>(n) * m > 20) {
    throw ValidationError(Errc::TooLarge, "oracle only accepts n*m <= 20");
  }
  const int cells = n * m;
  const int rank = n + m - 1;

  // Every vertex of the transportation polytope is the unique flow on some
  // spanning tree of K_{n,m}; enumerate all of them.
  std::vector<int> comb(rank);
  std::iota(comb.begin(), comb.end(), 0);
  double best = std::numeric_limits<double>::infinity();

  std::vector<int> parent(n + m);
  std::vector<int> degree(n + m);
  std::vector<double> residual(n + m);
  std::vector<std::vector<std::pair<int, int>>> incident(n + m);  // (cell index, other node)

  auto find_root = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  while (true) {
    // Spanning tree test.
    std::iota(parent.begin(), parent.end(), 0);
    bool tree = true;
    for (const int id : comb) {
      const int ri = find_root(id / m), rj = find_root(n + id % m);
      if (ri == rj) {
        tree = false;
        break;
      }
      parent[ri] = rj;
    }
    if (tree) {
      // Solve the tree flows by leaf elimination.
      std::fill(degree.begin(), degree.end(), 0);
      for (auto& lst : incident) lst.clear();
      for (const int id : comb) {
        const int i = id / m, j = n + id % m;
        ++degree[i];
        ++degree[j];
        incident[i].push_back({id, j});
        incident[j].push_back({id, i});
      }
      for (int i = 0; i < n; ++i) residual[i] = source[i];
      for (int j = 0; j < m; ++j) residual[n + j] = target[j];

      std::vector<int> leaves;
      for (int x = 0; x < n + m; ++x)
        if (degree[x] == 1) leaves.push_back(x);
      std::vector<char> used(cells, 0);
      double value = 0.0;
      bool feasible = true;
      for (int consumed = 0; consumed < rank && feasible; ++consumed) {
        int leaf = -1;
        while (!leaves.empty()) {
          const int cand = leaves.back();
          leaves.pop_back();
          if (degree[cand] == 1) {
            leaf = cand;
            break;
          }
        }
        if (leaf < 0) {
          feasible = false;
          break;
        }
        int edge = -1, other = -1;
        for (const auto& [id, nb] : incident[leaf]) {
          if (!used[id]) {
            edge = id;
            other = nb;
            break;
          }
        }
        used[edge] = 1;
        const double f = residual[leaf];
        if (f < -1e-12) {
          feasible = false;
          break;
        }
        value += std::max(0.0, f) * cost(edge / m, edge % m);
        residual[other] -= f;
        residual[leaf] = 0.0;
        --degree[other];
        --degree[leaf];
        if (degree[other] == 1) leaves.push_back(other);
      }
      if (feasible && value < best) best = value;
    }
    // Next combination.
    int pos = rank - 1;
    while (pos >= 0 && comb[pos] == cells - rank + pos) --pos;
    if (pos < 0) break;
    ++comb[pos];
    for (int q = pos + 1; q < rank; ++q) comb[q] = comb[q - 1] + 1;
  }
  return best;
}

}  // namespace wlmc
