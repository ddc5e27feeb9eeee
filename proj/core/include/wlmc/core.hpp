#ifndef WLMC_CORE_HPP
#define WLMC_CORE_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace wlmc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Errc {
  NonStochasticRow,
  NotStationary,
  ZeroMass,
  ShapeMismatch,
  NoConvergence,
  EmptyDistribution,
  InfeasibleMarginals,
  DimensionMismatch,
  TooLarge,
  LabelDimMismatch,
  IsolatedVertex,
  InvalidEdge,
  ParseError,
  MissingFile,
  IndexOutOfRange,
  MarginalMismatch,
  DegenerateFold,
  InvalidArgument,
};

const char* errc_name(Errc kind);

/// Domain-rule violation (bad probability vector, non-stationary measure, ...).
class ValidationError : public std::runtime_error {
 public:
  ValidationError(Errc kind, const std::string& what);
  Errc kind() const { return kind_; }

 private:
  Errc kind_;
};

/// Filesystem / parsing failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numeric conventions. Input slack is kept well below the OT solver's value
// tolerance so that the nested solves in the depth recursion stay meaningful.
inline constexpr double kProbTol = 1e-9;        // probability normalization, absolute
inline constexpr double kStationaryTol = 1e-8;  // stationarity residual, inf-norm
inline constexpr double kCouplingTol = 1e-7;    // coupling marginal slack
inline constexpr double kZeroDistance = 1e-7;   // threshold for "this distance is zero"

/// Probability vector: nonnegative entries summing to 1 within kProbTol.
class ProbVec {
 public:
  explicit ProbVec(Vector weights);

  static ProbVec uniform(int n);
  static ProbVec dirac(int n, int atom);

  const Vector& weights() const { return weights_; }
  double operator[](int i) const { return weights_[i]; }
  int size() const { return static_cast<int>(weights_.size()); }
  bool fully_supported() const;

 private:
  Vector weights_;
};

/// Row-stochastic transition matrix; row i is the step distribution of state i.
class MarkovKernel {
 public:
  explicit MarkovKernel(Matrix rows);

  const Matrix& matrix() const { return rows_; }
  int size() const { return static_cast<int>(rows_.rows()); }
  Vector row(int i) const { return rows_.row(i); }

 private:
  Matrix rows_;
};

/// Checks an n x d label matrix: d >= 1, all entries finite.
void check_labels(const Matrix& labels);

/// Finite Markov chain with a fully supported stationary distribution and a
/// real-vector label per state. Immutable once constructed.
class Lmmc {
 public:
  Lmmc(MarkovKernel kernel, ProbVec stationary, Matrix labels);

  const MarkovKernel& kernel() const { return kernel_; }
  const ProbVec& stationary() const { return stationary_; }
  const Matrix& labels() const { return labels_; }
  int size() const { return kernel_.size(); }
  int label_dim() const { return static_cast<int>(labels_.cols()); }

  /// Same chain with new labels (row count must match).
  Lmmc with_labels(Matrix labels) const;

 private:
  MarkovKernel kernel_;
  ProbVec stationary_;
  Matrix labels_;
};

/// Markov chain over a proper metric space: symmetric, zero diagonal,
/// strictly positive off-diagonal, triangle inequality (checked exhaustively
/// for n <= 64, sampled beyond).
class Mcms {
 public:
  Mcms(MarkovKernel kernel, ProbVec stationary, Matrix metric);

  const MarkovKernel& kernel() const { return kernel_; }
  const ProbVec& stationary() const { return stationary_; }
  const Matrix& metric() const { return metric_; }
  int size() const { return kernel_.size(); }

 private:
  MarkovKernel kernel_;
  ProbVec stationary_;
  Matrix metric_;
};

/// Builds an Lmmc from raw fields, running the full validation suite.
Lmmc validate_lmmc(const Matrix& kernel, const Vector& stationary, const Matrix& labels);

/// Stationary distribution by power iteration on the lazy mixture (I + M)/2.
/// The returned vector may lack full support (reducible chains); callers must
/// reject such vectors when constructing an Lmmc.
ProbVec stationary_of(const MarkovKernel& kernel, long max_iters = 1000000,
                      double tol = 1e-10);

}  // namespace wlmc

#endif  // WLMC_CORE_HPP
