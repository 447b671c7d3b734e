#pragma once

#include "dmoea/core.hpp"
#include "dmoea/random.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace dmoea {

/// Raised when a classifier is queried before it has seen both classes.
struct UntrainedModel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gaussian RBF kernel K(a, z) = exp(-scale * ||a - z||^2).
template <typename Scalar>
struct RbfKernel {
  Scalar scale = Scalar(1);

  explicit RbfKernel(Scalar s = Scalar(1));

  template <typename A, typename B>
  Scalar operator()(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& z) const {
    return std::exp(-scale * (a - z).squaredNorm());
  }
};

double kernel_eval(const RbfKernel<double>& kernel, const DecisionVector& a, const DecisionVector& z);

struct LabeledSample {
  DecisionVector x;
  int y = 1;  // -1 or +1
};

struct SvmTolerances {
  double kkt = 1e-6;             // set-membership tests on g
  double equality = 1e-8;        // |sum y alpha|
  double matrix_per_margin = 1e-6;  // ||Rinv Q_S - I||_max <= this * |S|
  double singular = 1e-10;       // smallest usable pivot / Schur complement
};

enum class SvmSet : std::uint8_t { Margin, Error, Remaining };

/// Outcome of one invariant audit.
struct KktReport {
  bool box_ok = true;
  bool partition_ok = true;
  bool kkt_ok = true;
  bool equality_ok = true;
  bool inverse_ok = true;
  double max_kkt_violation = 0.0;
  double equality_residual = 0.0;
  double inverse_residual = 0.0;
  double max_cached_margin_error = 0.0;
  std::string first_failure;

  bool ok() const { return box_ok && partition_ok && kkt_ok && equality_ok && inverse_ok; }
};

/// Exact incremental soft-margin SVM (adiabatic increments with KKT-set
/// migration). Samples are only ever added; every increment leaves the
/// dual optimum of the enlarged training set.
///
/// The margin set S is kept in an ordered list whose order matches rows
/// 1..|S| of the inverse bordered Jacobian; row 0 belongs to the bias.
template <typename Scalar>
class IncrementalSvm {
 public:
  using VectorS = Vector<Scalar>;
  using MatrixS = Matrix<Scalar>;
  using Index = Eigen::Index;
  /// Called after every set migration inside an increment.
  using StepObserver = std::function<void(const IncrementalSvm&)>;

  IncrementalSvm(RbfKernel<Scalar> kernel, Scalar C, SvmTolerances tol = {});

  // --- training ----------------------------------------------------------

  /// Adds one sample and restores the KKT conditions.
  void increment(const Eigen::Ref<const VectorS>& x, int y);
  void increment(const LabeledSample& s);

  void set_step_observer(StepObserver observer) { observer_ = std::move(observer); }

  // --- inverse Jacobian maintenance -------------------------------------

  /// Moves sample k into S and grows Rinv by one row/column. Throws
  /// DegenerateGeometry if the Schur complement of k is within tol.singular.
  void expand_inverse(Index k);
  /// Removes sample k from S (to `destination`) and shrinks Rinv.
  void deflate_inverse(Index k, SvmSet destination);
  /// Recomputes Rinv by dense inversion of the bordered matrix.
  void refresh_inverse();
  /// The bordered matrix [[0, y_S^T], [y_S, Q_SS]] built from scratch.
  MatrixS bordered_jacobian() const;
  /// max |Rinv * Q_S - I|
  Scalar inverse_residual() const;

  // --- queries -------------------------------------------------------------

  Index size() const noexcept { return n_; }
  Index dim() const noexcept { return dim_; }
  Scalar C() const noexcept { return C_; }
  Scalar bias() const noexcept { return b_; }
  const RbfKernel<Scalar>& kernel() const noexcept { return kernel_; }
  const SvmTolerances& tolerances() const noexcept { return tol_; }

  Scalar alpha(Index i) const { return alpha_[i]; }
  int label(Index i) const { return y_[i] > 0 ? 1 : -1; }
  auto sample(Index i) const { return X_.col(i); }
  SvmSet set_of(Index i) const { return set_[static_cast<std::size_t>(i)]; }
  /// Cached g_i, maintained along the solution path.
  Scalar cached_margin(Index i) const { return g_[i]; }
  /// g_i = sum_j Q_ij alpha_j + y_i b - 1, recomputed from scratch.
  Scalar margin(Index i) const;

  const std::vector<Index>& margin_set() const noexcept { return margin_; }
  std::vector<Index> error_set() const;
  std::vector<Index> remaining_set() const;
  const MatrixS& inverse_jacobian() const noexcept { return Rinv_; }

  bool has_both_classes() const noexcept { return positives_ > 0 && negatives_ > 0; }

  /// f(x) = sum_j alpha_j y_j K(x_j, x) + b. Throws UntrainedModel until both
  /// classes have been seen.
  Scalar decision_value(const Eigen::Ref<const VectorS>& x) const;
  /// sign(f(x)) with sign(0) = +1.
  int classify(const Eigen::Ref<const VectorS>& x) const;

  /// W(alpha) = 1/2 alpha^T Q alpha - sum alpha (the bias term vanishes at
  /// feasibility).
  Scalar dual_objective() const;
  Scalar equality_residual() const;

  KktReport check_invariants() const;

  /// Number of adiabatic steps taken since construction.
  std::size_t step_count() const noexcept { return steps_; }

 private:
  Index append_sample(const Eigen::Ref<const VectorS>& x, int y);
  void reserve_rows(Index rows);
  void reserve_margin_cols(Index cols);
  VectorS kernel_column(Index k) const;
  void recompute_support();
  void notify() const;

  // One adiabatic pass for candidate m; returns when m settles.
  void activate(Index m);
  void settle(Index m, const VectorS& kcol_m);
  bool bias_only_step(Index m, std::vector<char>& frozen);
  void try_join_margin(Index i, std::vector<char>& frozen);

  RbfKernel<Scalar> kernel_;
  Scalar C_;
  SvmTolerances tol_;

  Index dim_ = 0;
  Index n_ = 0;
  MatrixS X_;       // dim x capacity, one column per sample
  VectorS y_;       // +-1
  VectorS alpha_;
  VectorS g_;
  std::vector<SvmSet> set_;
  std::vector<char> inactive_;  // stored while only one class has been seen
  Scalar b_ = Scalar(0);

  std::vector<Index> margin_;  // ordered S
  MatrixS Rinv_;               // (|S|+1) x (|S|+1)
  MatrixS KS_;                 // capacity x margin capacity, K(x_i, x_{S_j})

  std::vector<Index> errors_;   // E, unordered
  std::vector<Index> support_;  // S u E
  Index positives_ = 0;
  Index negatives_ = 0;
  std::size_t steps_ = 0;
  StepObserver observer_;
};

extern template struct RbfKernel<float>;
extern template struct RbfKernel<double>;
extern template class IncrementalSvm<float>;
extern template class IncrementalSvm<double>;

using Svm = IncrementalSvm<double>;

/// Trains a fresh classifier by inserting `samples` in the given order.
Svm train_incremental(std::span<const LabeledSample> samples, double scale, double C,
                      SvmTolerances tol = {});

// ---------------------------------------------------------------------------
// Kernel scale selection

/// 1 / median pairwise squared distance (falls back to 1 for degenerate sets).
double median_heuristic_scale(std::span<const LabeledSample> samples);

/// {2^k * median_scale : k = -4 .. 2}. Narrower kernels turn the Gram
/// matrix into nearly the identity and most samples end up in S.
std::vector<double> default_scale_grid(std::span<const LabeledSample> samples);

struct ScaleSearchResult {
  double scale = 1.0;
  double accuracy = 0.0;
  bool used_fallback = false;
};

/// Grid scale with the best 5-fold cross-validated accuracy (ties go to the
/// smallest scale). Classes with fewer than 5 distinct samples fall back to
/// the median heuristic. At most `max_samples` samples (stratified random
/// subset drawn from `rng`) enter the cross-validation.
ScaleSearchResult grid_search_scale(std::span<const LabeledSample> samples,
                                    std::span<const double> grid, double C, Rng& rng,
                                    std::size_t max_samples = 400);

/// Diagnostic dump: alpha, b, set sizes and KKT residuals as JSON text. The
/// layout is informational and may change.
std::string svm_state_json(const Svm& svm);

}  // namespace dmoea
