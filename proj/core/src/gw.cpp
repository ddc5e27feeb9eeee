#include "wlmc/gw.hpp"

#include "wlmc/parallel.hpp"
#include "wlmc/wl.hpp"

#include <cmath>
#include <sstream>

namespace wlmc {

namespace {

constexpr int kChainCap = 32;
constexpr double kComposedTol = 1e-6;

void check_layer_marginals(const Matrix& plan, const Vector& wx, const Vector& wy, int layer,
                           int x, int y) {
  const double row_err = (plan.rowwise().sum() - wx).lpNorm<Eigen::Infinity>();
  const double col_err = (plan.colwise().sum().transpose() - wy).lpNorm<Eigen::Infinity>();
  if (plan.minCoeff() < 0.0 || row_err > kCouplingTol || col_err > kCouplingTol) {
    std::ostringstream os;
    os << "layer " << layer << " coupling at (" << x << "," << y << ") has marginal residuals "
       << row_err << ", " << col_err;
    throw ValidationError(Errc::MarginalMismatch, os.str());
  }
}

}  // namespace

KStepCouplingChain make_kstep_chain(const MarkovKernel& mx, const MarkovKernel& my, int k,
                                    const CouplingLayerFn& layer_fn) {
  if (k < 1) throw ValidationError(Errc::InvalidArgument, "chain needs k >= 1");
  const int n = mx.size(), m = my.size();
  if (n > kChainCap || m > kChainCap) {
    throw ValidationError(Errc::TooLarge, "coupling chains are capped at 32 states per side");
  }
  KStepCouplingChain chain;
  chain.k = k;
  chain.n = n;
  chain.m = m;
  chain.layers.resize(k);
  for (int l = 0; l < k; ++l) {
    chain.layers[l].resize(static_cast<size_t>(n) * m);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < m; ++y) {
        Matrix plan = layer_fn(l, x, y);
        if (plan.rows() != n || plan.cols() != m) {
          throw ValidationError(Errc::ShapeMismatch, "layer coupling has the wrong shape");
        }
        check_layer_marginals(plan, mx.row(x), my.row(y), l, x, y);
        chain.layers[l][static_cast<size_t>(x) * m + y] = std::move(plan);
      }
  }

  // Compose back to front: the layer-0 coupling is the one applied first.
  std::vector<Matrix> composed = chain.layers[k - 1];
  for (int l = k - 2; l >= 0; --l) {
    std::vector<Matrix> next(static_cast<size_t>(n) * m);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < m; ++y) {
        const Matrix& first = chain.layers[l][static_cast<size_t>(x) * m + y];
        Matrix acc = Matrix::Zero(n, m);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < m; ++b) {
            const double w = first(a, b);
            if (w > 0.0) acc += w * composed[static_cast<size_t>(a) * m + b];
          }
        next[static_cast<size_t>(x) * m + y] = std::move(acc);
      }
    composed = std::move(next);
  }
  chain.composed = std::move(composed);

  const KStepKernel kx = kstep_kernel(mx, k);
  const KStepKernel ky = kstep_kernel(my, k);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < m; ++y) {
      const Matrix& plan = chain.composed_at(x, y);
      const double row_err =
          (plan.rowwise().sum() - kx.rows.row(x).transpose()).lpNorm<Eigen::Infinity>();
      const double col_err =
          (plan.colwise().sum() - ky.rows.row(y)).lpNorm<Eigen::Infinity>();
      if (row_err > kComposedTol || col_err > kComposedTol) {
        std::ostringstream os;
        os << "composed coupling at (" << x << "," << y << ") misses the k-step marginals: "
           << row_err << ", " << col_err;
        throw ValidationError(Errc::MarginalMismatch, os.str());
      }
    }
  return chain;
}

KStepCouplingChain make_product_kstep(const MarkovKernel& mx, const MarkovKernel& my, int k) {
  return make_kstep_chain(mx, my, k, [&](int, int x, int y) {
    return Matrix(mx.row(x) * my.row(y).transpose());
  });
}

KStepCouplingChain make_diagonal_kstep(const MarkovKernel& m, int k) {
  return make_kstep_chain(m, m, k, [&](int, int x, int y) {
    if (x == y) return Matrix(m.row(x).asDiagonal());
    return Matrix(m.row(x) * m.row(y).transpose());
  });
}

Matrix compose_with(const KStepCouplingChain& nu, const Matrix& gamma) {
  if (gamma.rows() != nu.n || gamma.cols() != nu.m) {
    throw ValidationError(Errc::ShapeMismatch, "gamma shape does not match the chain");
  }
  Matrix out = Matrix::Zero(nu.n, nu.m);
  for (int x = 0; x < nu.n; ++x)
    for (int y = 0; y < nu.m; ++y) {
      const double w = gamma(x, y);
      if (w > 0.0) out += w * nu.composed_at(x, y);
    }
  return out;
}

Matrix eccentricity(const Mcms& m) {
  return m.metric() * m.stationary().weights();
}

double diameter(const Mcms& m) {
  const Vector& mu = m.stationary().weights();
  return mu.transpose() * m.metric() * mu;
}

double diameter_lb(const Mcms& mx, const Mcms& my) {
  return std::abs(diameter(mx) - diameter(my));
}

double tlb_lower_bound(const Mcms& mx, const Mcms& my, int k, int jobs) {
  if (k < 1) throw ValidationError(Errc::InvalidArgument, "lower bound needs k >= 1");
  const int n = mx.size(), m = my.size();
  Matrix outer(n, m);
  util::parallel_for(static_cast<std::int64_t>(n) * m, jobs, [&](std::int64_t idx) {
    const int i = static_cast<int>(idx / m), j = static_cast<int>(idx % m);
    const Lmmc x(mx.kernel(), mx.stationary(), mx.metric().col(i));
    const Lmmc y(my.kernel(), my.stationary(), my.metric().col(j));
    outer(i, j) = wl_distance(x, y, k);
  });
  return detail::transport_value(outer, mx.stationary().weights(), my.stationary().weights());
}

double distortion_k(const Mcms& mx, const Mcms& my, const Coupling& gamma,
                    const KStepCouplingChain& nu) {
  const int n = mx.size(), m = my.size();
  if (gamma.plan.rows() != n || gamma.plan.cols() != m || nu.n != n || nu.m != m) {
    throw ValidationError(Errc::ShapeMismatch, "distortion arguments disagree on sizes");
  }
  const double src_err =
      (gamma.source.weights() - mx.stationary().weights()).lpNorm<Eigen::Infinity>();
  const double tgt_err =
      (gamma.target.weights() - my.stationary().weights()).lpNorm<Eigen::Infinity>();
  if (src_err > kCouplingTol || tgt_err > kCouplingTol) {
    throw ValidationError(Errc::MarginalMismatch, "gamma does not couple the stationary measures");
  }
  // The inner double integral collapses: averaging the composed maps against
  // gamma yields a single coupling for the primed pair.
  const Matrix inner = compose_with(nu, gamma.plan);
  double total = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < m; ++y) {
      const double w = gamma.plan(x, y);
      if (w <= 0.0) continue;
      double acc = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < m; ++b)
          acc += inner(a, b) * std::abs(mx.metric()(x, a) - my.metric()(y, b));
      total += w * acc;
    }
  return total;
}

}  // namespace wlmc
