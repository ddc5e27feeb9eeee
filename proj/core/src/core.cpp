#include "wlmc/core.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace wlmc {

const char* errc_name(Errc kind) {
  switch (kind) {
    case Errc::NonStochasticRow: return "NonStochasticRow";
    case Errc::NotStationary: return "NotStationary";
    case Errc::ZeroMass: return "ZeroMass";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::EmptyDistribution: return "EmptyDistribution";
    case Errc::InfeasibleMarginals: return "InfeasibleMarginals";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::TooLarge: return "TooLarge";
    case Errc::LabelDimMismatch: return "LabelDimMismatch";
    case Errc::IsolatedVertex: return "IsolatedVertex";
    case Errc::InvalidEdge: return "InvalidEdge";
    case Errc::ParseError: return "ParseError";
    case Errc::MissingFile: return "MissingFile";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::MarginalMismatch: return "MarginalMismatch";
    case Errc::DegenerateFold: return "DegenerateFold";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ValidationError::ValidationError(Errc kind, const std::string& what)
    : std::runtime_error(std::string(errc_name(kind)) + ": " + what), kind_(kind) {}

ProbVec::ProbVec(Vector weights) : weights_(std::move(weights)) {
  if (weights_.size() == 0) {
    throw ValidationError(Errc::EmptyDistribution, "probability vector has no entries");
  }
  for (int i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0) {
      std::ostringstream os;
      os << "entry " << i << " = " << weights_[i] << " is negative or not finite";
      throw ValidationError(Errc::NonStochasticRow, os.str());
    }
  }
  const double sum = weights_.sum();
  if (std::abs(sum - 1.0) > kProbTol) {
    std::ostringstream os;
    os << "mass sums to " << sum << ", expected 1 within " << kProbTol;
    throw ValidationError(Errc::NonStochasticRow, os.str());
  }
}

ProbVec ProbVec::uniform(int n) {
  if (n <= 0) throw ValidationError(Errc::EmptyDistribution, "uniform over empty set");
  return ProbVec(Vector::Constant(n, 1.0 / n));
}

ProbVec ProbVec::dirac(int n, int atom) {
  if (atom < 0 || atom >= n) {
    throw ValidationError(Errc::IndexOutOfRange, "dirac atom outside state set");
  }
  Vector w = Vector::Zero(n);
  w[atom] = 1.0;
  return ProbVec(std::move(w));
}

bool ProbVec::fully_supported() const { return weights_.minCoeff() > 0.0; }

MarkovKernel::MarkovKernel(Matrix rows) : rows_(std::move(rows)) {
  if (rows_.rows() == 0 || rows_.rows() != rows_.cols()) {
    throw ValidationError(Errc::ShapeMismatch, "kernel must be square and nonempty");
  }
  for (int i = 0; i < rows_.rows(); ++i) {
    try {
      ProbVec check{Vector(rows_.row(i))};
    } catch (const ValidationError&) {
      std::ostringstream os;
      os << "kernel row " << i << " is not a probability vector";
      throw ValidationError(Errc::NonStochasticRow, os.str());
    }
  }
}

void check_labels(const Matrix& labels) {
  if (labels.cols() < 1) {
    throw ValidationError(Errc::LabelDimMismatch, "labels need at least one column");
  }
  if (!labels.allFinite()) {
    throw ValidationError(Errc::LabelDimMismatch, "labels contain non-finite entries");
  }
}

namespace {

void check_stationary(const MarkovKernel& kernel, const ProbVec& stationary) {
  if (stationary.size() != kernel.size()) {
    throw ValidationError(Errc::ShapeMismatch, "stationary length != kernel dimension");
  }
  if (!stationary.fully_supported()) {
    throw ValidationError(Errc::ZeroMass, "stationary distribution is not fully supported");
  }
  const Vector residual =
      kernel.matrix().transpose() * stationary.weights() - stationary.weights();
  const double err = residual.lpNorm<Eigen::Infinity>();
  if (err > kStationaryTol) {
    std::ostringstream os;
    os << "stationarity residual " << err << " exceeds " << kStationaryTol;
    throw ValidationError(Errc::NotStationary, os.str());
  }
}

}  // namespace

Lmmc::Lmmc(MarkovKernel kernel, ProbVec stationary, Matrix labels)
    : kernel_(std::move(kernel)), stationary_(std::move(stationary)), labels_(std::move(labels)) {
  check_stationary(kernel_, stationary_);
  check_labels(labels_);
  if (labels_.rows() != kernel_.size()) {
    throw ValidationError(Errc::ShapeMismatch, "label row count != kernel dimension");
  }
}

Lmmc Lmmc::with_labels(Matrix labels) const { return Lmmc(kernel_, stationary_, std::move(labels)); }

Mcms::Mcms(MarkovKernel kernel, ProbVec stationary, Matrix metric)
    : kernel_(std::move(kernel)), stationary_(std::move(stationary)), metric_(std::move(metric)) {
  check_stationary(kernel_, stationary_);
  const int n = kernel_.size();
  if (metric_.rows() != n || metric_.cols() != n) {
    throw ValidationError(Errc::ShapeMismatch, "metric must be n x n");
  }
  if (!metric_.allFinite()) {
    throw ValidationError(Errc::InvalidArgument, "metric has non-finite entries");
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(metric_(i, i)) > 1e-12) {
      throw ValidationError(Errc::InvalidArgument, "metric diagonal must be zero");
    }
    for (int j = 0; j < n; ++j) {
      if (i != j && metric_(i, j) <= 0.0) {
        throw ValidationError(Errc::InvalidArgument,
                              "metric must be strictly positive off the diagonal");
      }
      if (std::abs(metric_(i, j) - metric_(j, i)) > 1e-12) {
        throw ValidationError(Errc::InvalidArgument, "metric must be symmetric");
      }
    }
  }
  auto check_triple = [&](int i, int j, int l) {
    if (metric_(i, l) > metric_(i, j) + metric_(j, l) + 1e-9) {
      std::ostringstream os;
      os << "triangle inequality fails on (" << i << "," << j << "," << l << ")";
      throw ValidationError(Errc::InvalidArgument, os.str());
    }
  };
  if (n <= 64) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) check_triple(i, j, l);
  } else {
    std::mt19937 rng(0x9e3779b9u);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int s = 0; s < 100000; ++s) check_triple(pick(rng), pick(rng), pick(rng));
  }
}

Lmmc validate_lmmc(const Matrix& kernel, const Vector& stationary, const Matrix& labels) {
  ProbVec mu{[&] {
    try {
      return ProbVec(stationary);
    } catch (const ValidationError& e) {
      if (e.kind() == Errc::NonStochasticRow) {
        throw ValidationError(Errc::ZeroMass, "stationary is not a probability vector");
      }
      throw;
    }
  }()};
  return Lmmc(MarkovKernel(kernel), std::move(mu), labels);
}

ProbVec stationary_of(const MarkovKernel& kernel, long max_iters, double tol) {
  const int n = kernel.size();
  const Matrix& m = kernel.matrix();
  Vector mu = Vector::Constant(n, 1.0 / n);
  for (long it = 0; it < max_iters; ++it) {
    Vector stepped = m.transpose() * mu;
    if ((stepped - mu).lpNorm<Eigen::Infinity>() <= tol) {
      stepped /= stepped.sum();
      return ProbVec(std::move(stepped));
    }
    // Lazy mixture keeps periodic chains from oscillating; same fixed points.
    mu = 0.5 * (mu + stepped);
    mu /= mu.sum();
  }
  throw ValidationError(Errc::NoConvergence, "power iteration did not reach tolerance");
}

}  // namespace wlmc
