#include "dmoea/isvm.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace dmoea {

template <typename Scalar>
RbfKernel<Scalar>::RbfKernel(Scalar s) : scale(s) {
  if (!(s > Scalar(0))) throw ConfigError("RBF kernel scale must be positive");
}

double kernel_eval(const RbfKernel<double>& kernel, const DecisionVector& a, const DecisionVector& z) {
  if (a.size() != z.size()) throw ContractViolation("kernel_eval: dimension mismatch");
  return kernel(a, z);
}

template <typename Scalar>
IncrementalSvm<Scalar>::IncrementalSvm(RbfKernel<Scalar> kernel, Scalar C, SvmTolerances tol)
    : kernel_(kernel), C_(C), tol_(tol), Rinv_(MatrixS::Zero(1, 1)) {
  if (!(C > Scalar(0))) throw ConfigError("SVM penalty C must be positive");
}

// ---------------------------------------------------------------------------
// storage

template <typename Scalar>
void IncrementalSvm<Scalar>::reserve_rows(Index rows) {
  const Index cap = X_.cols();
  if (rows <= cap) return;
  const Index new_cap = std::max<Index>(rows, std::max<Index>(16, 2 * cap));
  MatrixS X(dim_, new_cap);
  X.leftCols(n_) = X_.leftCols(n_);
  X_.swap(X);
  auto grow = [&](VectorS& v) {
    VectorS w(new_cap);
    w.head(n_) = v.head(n_);
    v.swap(w);
  };
  grow(y_);
  grow(alpha_);
  grow(g_);
  const Index s = static_cast<Index>(margin_.size());
  MatrixS K(new_cap, std::max<Index>(KS_.cols(), 8));
  K.topLeftCorner(n_, s) = KS_.topLeftCorner(n_, s);
  KS_.swap(K);
}

template <typename Scalar>
void IncrementalSvm<Scalar>::reserve_margin_cols(Index cols) {
  if (cols <= KS_.cols()) return;
  const Index new_cap = std::max<Index>(cols, 2 * KS_.cols());
  const Index s = static_cast<Index>(margin_.size());
  MatrixS K(KS_.rows(), new_cap);
  K.topLeftCorner(n_, s) = KS_.topLeftCorner(n_, s);
  KS_.swap(K);
}

template <typename Scalar>
typename IncrementalSvm<Scalar>::Index IncrementalSvm<Scalar>::append_sample(
    const Eigen::Ref<const VectorS>& x, int y) {
  if (y != 1 && y != -1) throw ContractViolation("SVM labels must be -1 or +1");
  if (n_ == 0 && X_.cols() == 0) dim_ = x.size();
  if (x.size() != dim_ || dim_ == 0) throw ContractViolation("SVM sample dimension mismatch");
  reserve_rows(n_ + 1);
  const Index m = n_;
  X_.col(m) = x;
  y_[m] = Scalar(y);
  alpha_[m] = Scalar(0);
  g_[m] = Scalar(0);
  set_.push_back(SvmSet::Remaining);
  inactive_.push_back(0);
  for (std::size_t p = 0; p < margin_.size(); ++p)
    KS_(m, static_cast<Index>(p)) = kernel_(X_.col(m), X_.col(margin_[p]));
  ++n_;
  (y > 0 ? positives_ : negatives_) += 1;
  return m;
}

template <typename Scalar>
typename IncrementalSvm<Scalar>::VectorS IncrementalSvm<Scalar>::kernel_column(Index k) const {
  const auto xk = X_.col(k);
  VectorS d2 = (X_.leftCols(n_).colwise() - xk).colwise().squaredNorm().transpose();
  return (-kernel_.scale * d2.array()).exp().matrix();
}

template <typename Scalar>
void IncrementalSvm<Scalar>::recompute_support() {
  support_ = margin_;
  support_.insert(support_.end(), errors_.begin(), errors_.end());
}

template <typename Scalar>
void IncrementalSvm<Scalar>::notify() const {
  if (observer_) observer_(*this);
}

// ---------------------------------------------------------------------------
// inverse Jacobian

namespace {
// Rank-one updates whose amplification exceeds this lose too many digits;
// Rinv is then rebuilt from Q_S instead.
constexpr double kUpdateGrowthLimit = 1e6;
}  // namespace

template <typename Scalar>
void IncrementalSvm<Scalar>::expand_inverse(Index k) {
  if (k < 0 || k >= n_) throw ContractViolation("expand_inverse: index out of range");
  if (set_of(k) == SvmSet::Margin) throw ContractViolation("expand_inverse: sample already in S");
  const Index s = static_cast<Index>(margin_.size());
  const Scalar yk = y_[k];
  bool ill_conditioned = false;

  if (s == 0) {
    // Inverse of [[0, y], [y, Q_kk]] with Q_kk = K(x, x) = 1 and y^2 = 1.
    Rinv_.resize(2, 2);
    Rinv_ << Scalar(-1), yk, yk, Scalar(0);
  } else {
    VectorS u(s + 1);
    u[0] = yk;
    for (Index p = 0; p < s; ++p) u[p + 1] = yk * y_[margin_[p]] * KS_(k, p);
    VectorS beta = -(Rinv_ * u);
    const Scalar gamma = Scalar(1) + u.dot(beta);
    if (std::abs(gamma) <= Scalar(tol_.singular)) {
      std::ostringstream os;
      os << "bordered Jacobian singular when adding sample " << k << " (gamma = " << gamma << ")";
      throw DegenerateGeometry(os.str());
    }
    MatrixS R = MatrixS::Zero(s + 2, s + 2);
    R.topLeftCorner(s + 1, s + 1) = Rinv_;
    VectorS w(s + 2);
    w.head(s + 1) = beta;
    w[s + 1] = Scalar(1);
    R.noalias() += (w * w.transpose()) / gamma;
    Rinv_.swap(R);
    ill_conditioned = w.squaredNorm() / std::abs(gamma) > Scalar(kUpdateGrowthLimit);
  }

  reserve_margin_cols(s + 1);
  KS_.col(s).head(n_) = kernel_column(k);
  if (set_of(k) == SvmSet::Error) std::erase(errors_, k);
  margin_.push_back(k);
  set_[static_cast<std::size_t>(k)] = SvmSet::Margin;
  recompute_support();
  if (ill_conditioned) refresh_inverse();
}

template <typename Scalar>
void IncrementalSvm<Scalar>::deflate_inverse(Index k, SvmSet destination) {
  if (destination == SvmSet::Margin) throw ContractViolation("deflate_inverse: destination must be E or R");
  const auto it = std::find(margin_.begin(), margin_.end(), k);
  if (it == margin_.end()) throw ContractViolation("deflate_inverse: sample not in S");
  const Index s = static_cast<Index>(margin_.size());
  const Index p = static_cast<Index>(it - margin_.begin());
  bool ill_conditioned = false;

  if (s == 1) {
    Rinv_ = MatrixS::Zero(1, 1);
    margin_.clear();
  } else {
    const Index last = s - 1;
    if (p != last) {
      Rinv_.row(p + 1).swap(Rinv_.row(last + 1));
      Rinv_.col(p + 1).swap(Rinv_.col(last + 1));
      KS_.col(p).head(n_).swap(KS_.col(last).head(n_));
      std::swap(margin_[static_cast<std::size_t>(p)], margin_.back());
    }
    const Index q = last + 1;
    const Scalar rkk = Rinv_(q, q);
    if (std::abs(rkk) <= Scalar(tol_.singular))
      throw DegenerateGeometry("deflate_inverse: vanishing pivot in inverse Jacobian");
    MatrixS R = Rinv_.topLeftCorner(q, q);
    R.noalias() -= (Rinv_.col(q).head(q) * Rinv_.row(q).head(q)) / rkk;
    ill_conditioned = Rinv_.col(q).head(q).squaredNorm() / std::abs(rkk) > Scalar(kUpdateGrowthLimit);
    Rinv_.swap(R);
    margin_.pop_back();
  }

  set_[static_cast<std::size_t>(k)] = destination;
  if (destination == SvmSet::Error) errors_.push_back(k);
  recompute_support();
  if (ill_conditioned) refresh_inverse();
}

template <typename Scalar>
typename IncrementalSvm<Scalar>::MatrixS IncrementalSvm<Scalar>::bordered_jacobian() const {
  const Index s = static_cast<Index>(margin_.size());
  MatrixS Q(s + 1, s + 1);
  Q(0, 0) = Scalar(0);
  for (Index a = 0; a < s; ++a) {
    const Index i = margin_[a];
    Q(0, a + 1) = Q(a + 1, 0) = y_[i];
    for (Index c = 0; c < s; ++c) {
      const Index j = margin_[c];
      Q(a + 1, c + 1) = y_[i] * y_[j] * kernel_(X_.col(i), X_.col(j));
    }
  }
  return Q;
}

template <typename Scalar>
void IncrementalSvm<Scalar>::refresh_inverse() {
  if (margin_.empty()) {
    Rinv_ = MatrixS::Zero(1, 1);
    return;
  }
  Rinv_ = bordered_jacobian().fullPivLu().inverse();
}

template <typename Scalar>
Scalar IncrementalSvm<Scalar>::inverse_residual() const {
  if (margin_.empty()) return Scalar(0);
  const MatrixS Q = bordered_jacobian();
  return (Rinv_ * Q - MatrixS::Identity(Q.rows(), Q.cols())).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// incremental training

template <typename Scalar>
void IncrementalSvm<Scalar>::increment(const LabeledSample& s) {
  increment(s.x.template cast<Scalar>(), s.y);
}

template <typename Scalar>
void IncrementalSvm<Scalar>::increment(const Eigen::Ref<const VectorS>& x, int y) {
  const Index m = append_sample(x, y);
  if (n_ > 1 && !has_both_classes()) {
    // One class so far: the sample is stored with alpha = 0 and enters the
    // path once the other class shows up. Its margin equals the first one's.
    inactive_[static_cast<std::size_t>(m)] = 1;
    g_[m] = y_[m] * b_ - Scalar(1);
    notify();
    return;
  }
  activate(m);
  if ((y > 0 ? positives_ : negatives_) == 1 && n_ > 1) {
    // First sample of the second class: replay the stored ones in order.
    for (Index i = 0; i < n_; ++i)
      if (inactive_[static_cast<std::size_t>(i)]) {
        inactive_[static_cast<std::size_t>(i)] = 0;
        activate(i);
      }
  }
}

template <typename Scalar>
void IncrementalSvm<Scalar>::activate(Index m) {
  Scalar f = b_;
  for (Index j : support_) f += alpha_[j] * y_[j] * kernel_(X_.col(j), X_.col(m));
  g_[m] = y_[m] * f - Scalar(1);

  if (g_[m] > Scalar(tol_.kkt)) {
    notify();
    return;
  }
  std::vector<char> frozen(static_cast<std::size_t>(n_), 0);
  if (g_[m] >= -Scalar(tol_.kkt)) {
    g_[m] = Scalar(0);
    try_join_margin(m, frozen);
    notify();
    return;
  }
  settle(m, kernel_column(m));
}

template <typename Scalar>
void IncrementalSvm<Scalar>::try_join_margin(Index i, std::vector<char>& frozen) {
  try {
    expand_inverse(i);
  } catch (const DegenerateGeometry& e) {
    // i sits at g = 0, which is admissible for both E (alpha = C) and
    // R (alpha = 0); it stays put for the rest of this increment.
    frozen[static_cast<std::size_t>(i)] = 1;
    if (set_of(i) == SvmSet::Remaining && alpha_[i] != Scalar(0)) {
      alpha_[i] = std::clamp(alpha_[i], Scalar(0), C_);
      if (alpha_[i] >= C_) {
        set_[static_cast<std::size_t>(i)] = SvmSet::Error;
        errors_.push_back(i);
        recompute_support();
      }
    }
    std::ostringstream os;
    os << "isvm: " << e.what() << "; sample kept outside the margin set";
    log_warning(os.str());
  }
}

template <typename Scalar>
bool IncrementalSvm<Scalar>::bias_only_step(Index m, std::vector<char>& frozen) {
  // With S empty only b can move: dg_i = y_i y_m * lambda.
  const Scalar ym = y_[m];
  Scalar best = -g_[m];
  Index who = m;
  for (Index i = 0; i < n_; ++i) {
    if (i == m || frozen[static_cast<std::size_t>(i)] || inactive_[static_cast<std::size_t>(i)]) continue;
    const Scalar dir = y_[i] * ym;
    Scalar d = std::numeric_limits<Scalar>::infinity();
    if (set_of(i) == SvmSet::Remaining && dir < 0) d = g_[i];
    else if (set_of(i) == SvmSet::Error && dir > 0) d = -g_[i];
    if (d < best || (d == best && i < who)) {
      best = d;
      who = i;
    }
  }
  const Scalar lambda = std::max(best, Scalar(0));
  b_ += ym * lambda;
  g_.head(n_).array() += (ym * lambda) * y_.head(n_).array();
  ++steps_;
  g_[who] = Scalar(0);
  try_join_margin(who, frozen);
  notify();
  return who == m;
}

template <typename Scalar>
void IncrementalSvm<Scalar>::settle(Index m, const VectorS& kcol_m) {
  enum class Event { CandidateMargin, CandidateError, LeaveToError, LeaveToRemaining, JoinMargin };
  std::vector<char> frozen(static_cast<std::size_t>(n_), 0);
  const Scalar ym = y_[m];
  const Scalar eps = Scalar(tol_.singular);
  const std::size_t max_steps = 20 * static_cast<std::size_t>(n_) + 100;

  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_steps) {
      log_warning("isvm: step limit reached while settling a sample");
      return;
    }
    if (set_of(m) != SvmSet::Remaining) return;

    if (margin_.empty()) {
      if (bias_only_step(m, frozen)) return;
      continue;
    }

    const Index s = static_cast<Index>(margin_.size());
    VectorS u(s + 1);
    u[0] = ym;
    for (Index p = 0; p < s; ++p) u[p + 1] = ym * y_[margin_[p]] * kcol_m[margin_[p]];
    const VectorS beta = -(Rinv_ * u);

    VectorS ybeta(s);
    for (Index p = 0; p < s; ++p) ybeta[p] = y_[margin_[p]] * beta[p + 1];
    VectorS h = KS_.topLeftCorner(n_, s) * ybeta;
    h.array() += ym * kcol_m.head(n_).array() + beta[0];
    const VectorS gamma = y_.head(n_).cwiseProduct(h);

    Scalar best = std::numeric_limits<Scalar>::infinity();
    Index who = -1;
    Event event = Event::CandidateError;
    auto consider = [&](Scalar d, Index i, Event e) {
      if (d < best || (d == best && i < who)) {
        best = d;
        who = i;
        event = e;
      }
    };

    consider(C_ - alpha_[m], m, Event::CandidateError);
    if (gamma[m] > eps) consider(-g_[m] / gamma[m], m, Event::CandidateMargin);
    for (Index p = 0; p < s; ++p) {
      const Index j = margin_[p];
      const Scalar bj = beta[p + 1];
      if (bj > eps) consider((C_ - alpha_[j]) / bj, j, Event::LeaveToError);
      else if (bj < -eps) consider(-alpha_[j] / bj, j, Event::LeaveToRemaining);
    }
    for (Index i = 0; i < n_; ++i) {
      if (i == m || frozen[static_cast<std::size_t>(i)] || inactive_[static_cast<std::size_t>(i)]) continue;
      const SvmSet set = set_of(i);
      if (set == SvmSet::Error && gamma[i] > eps) consider(-g_[i] / gamma[i], i, Event::JoinMargin);
      else if (set == SvmSet::Remaining && gamma[i] < -eps)
        consider(g_[i] / -gamma[i], i, Event::JoinMargin);
    }

    const Scalar d = std::max(best, Scalar(0));
    for (Index p = 0; p < s; ++p) alpha_[margin_[p]] += beta[p + 1] * d;
    b_ += beta[0] * d;
    alpha_[m] += d;
    g_.head(n_).noalias() += d * gamma;
    for (Index j : margin_) g_[j] = Scalar(0);
    ++steps_;

    switch (event) {
      case Event::CandidateMargin:
        g_[m] = Scalar(0);
        try_join_margin(m, frozen);
        notify();
        return;
      case Event::CandidateError:
        alpha_[m] = C_;
        set_[static_cast<std::size_t>(m)] = SvmSet::Error;
        errors_.push_back(m);
        recompute_support();
        notify();
        return;
      case Event::LeaveToError:
        alpha_[who] = C_;
        deflate_inverse(who, SvmSet::Error);
        break;
      case Event::LeaveToRemaining:
        alpha_[who] = Scalar(0);
        deflate_inverse(who, SvmSet::Remaining);
        break;
      case Event::JoinMargin:
        g_[who] = Scalar(0);
        try_join_margin(who, frozen);
        break;
    }
    notify();
  }
}

// ---------------------------------------------------------------------------
// queries

template <typename Scalar>
Scalar IncrementalSvm<Scalar>::margin(Index i) const {
  if (i < 0 || i >= n_) throw ContractViolation("margin: index out of range");
  Scalar f = b_;
  for (Index j = 0; j < n_; ++j)
    if (alpha_[j] != Scalar(0)) f += alpha_[j] * y_[j] * kernel_(X_.col(j), X_.col(i));
  return y_[i] * f - Scalar(1);
}

template <typename Scalar>
std::vector<typename IncrementalSvm<Scalar>::Index> IncrementalSvm<Scalar>::error_set() const {
  std::vector<Index> e = errors_;
  std::sort(e.begin(), e.end());
  return e;
}

template <typename Scalar>
std::vector<typename IncrementalSvm<Scalar>::Index> IncrementalSvm<Scalar>::remaining_set() const {
  std::vector<Index> r;
  for (Index i = 0; i < n_; ++i)
    if (set_of(i) == SvmSet::Remaining) r.push_back(i);
  return r;
}

template <typename Scalar>
Scalar IncrementalSvm<Scalar>::decision_value(const Eigen::Ref<const VectorS>& x) const {
  if (!has_both_classes()) throw UntrainedModel("classifier has not seen both classes yet");
  if (x.size() != dim_) throw ContractViolation("decision_value: dimension mismatch");
  Scalar f = b_;
  for (Index j : support_) f += alpha_[j] * y_[j] * kernel_(X_.col(j), x);
  return f;
}

template <typename Scalar>
int IncrementalSvm<Scalar>::classify(const Eigen::Ref<const VectorS>& x) const {
  return decision_value(x) >= Scalar(0) ? 1 : -1;
}

template <typename Scalar>
Scalar IncrementalSvm<Scalar>::dual_objective() const {
  Scalar quad = Scalar(0);
  for (Index a : support_)
    for (Index c : support_)
      quad += alpha_[a] * alpha_[c] * y_[a] * y_[c] * kernel_(X_.col(a), X_.col(c));
  return Scalar(0.5) * quad - alpha_.head(n_).sum();
}

template <typename Scalar>
Scalar IncrementalSvm<Scalar>::equality_residual() const {
  return std::abs(y_.head(n_).dot(alpha_.head(n_)));
}

template <typename Scalar>
KktReport IncrementalSvm<Scalar>::check_invariants() const {
  KktReport rep;
  auto fail = [&](bool& flag, const std::string& what) {
    flag = false;
    if (rep.first_failure.empty()) rep.first_failure = what;
  };
  const double box_eps = 1e-9 * static_cast<double>(C_);
  const double tk = tol_.kkt;

  std::size_t margins = 0, errors = 0;
  for (Index i = 0; i < n_; ++i) {
    const double a = static_cast<double>(alpha_[i]);
    if (a < -box_eps || a > static_cast<double>(C_) + box_eps)
      fail(rep.box_ok, "alpha out of [0, C] at " + std::to_string(i));
    const double g = static_cast<double>(margin(i));
    if (set_of(i) != SvmSet::Margin)
      rep.max_cached_margin_error =
          std::max(rep.max_cached_margin_error, std::abs(g - static_cast<double>(g_[i])));
    double violation = 0.0;
    switch (set_of(i)) {
      case SvmSet::Margin:
        ++margins;
        violation = std::abs(g);
        break;
      case SvmSet::Error:
        ++errors;
        violation = std::max(g, 0.0);
        if (std::abs(a - static_cast<double>(C_)) > box_eps)
          fail(rep.kkt_ok, "error vector with alpha != C at " + std::to_string(i));
        break;
      case SvmSet::Remaining:
        if (!inactive_[static_cast<std::size_t>(i)]) violation = std::max(-g, 0.0);
        if (std::abs(a) > box_eps) fail(rep.kkt_ok, "remaining vector with alpha != 0 at " + std::to_string(i));
        break;
    }
    rep.max_kkt_violation = std::max(rep.max_kkt_violation, violation);
    if (violation > tk) fail(rep.kkt_ok, "KKT violation " + std::to_string(violation) + " at " + std::to_string(i));
  }
  if (margins != margin_.size() || errors != errors_.size())
    fail(rep.partition_ok, "set bookkeeping out of sync");
  for (Index j : margin_)
    if (set_of(j) != SvmSet::Margin) fail(rep.partition_ok, "S list holds a non-margin sample");
  for (Index j : errors_)
    if (set_of(j) != SvmSet::Error) fail(rep.partition_ok, "E list holds a non-error sample");

  rep.equality_residual = static_cast<double>(equality_residual());
  if (rep.equality_residual > tol_.equality) fail(rep.equality_ok, "sum y alpha != 0");

  rep.inverse_residual = static_cast<double>(inverse_residual());
  const double tol_mat = tol_.matrix_per_margin * static_cast<double>(std::max<std::size_t>(1, margin_.size()));
  if (rep.inverse_residual > tol_mat) fail(rep.inverse_ok, "Rinv * Q_S deviates from identity");
  return rep;
}

template struct RbfKernel<float>;
template struct RbfKernel<double>;
template class IncrementalSvm<float>;
template class IncrementalSvm<double>;

// ---------------------------------------------------------------------------

Svm train_incremental(std::span<const LabeledSample> samples, double scale, double C, SvmTolerances tol) {
  Svm svm(RbfKernel<double>(scale), C, tol);
  for (const auto& s : samples) svm.increment(s);
  return svm;
}

double median_heuristic_scale(std::span<const LabeledSample> samples) {
  std::vector<double> d2;
  d2.reserve(samples.size() * (samples.size() - (samples.empty() ? 0 : 1)) / 2);
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j)
      d2.push_back((samples[i].x - samples[j].x).squaredNorm());
  if (d2.empty()) return 1.0;
  auto mid = d2.begin() + static_cast<std::ptrdiff_t>(d2.size() / 2);
  std::nth_element(d2.begin(), mid, d2.end());
  double med = *mid;
  if (!(med > 0.0)) {
    double sum = 0.0;
    std::size_t cnt = 0;
    for (double v : d2)
      if (v > 0.0) {
        sum += v;
        ++cnt;
      }
    if (cnt == 0) return 1.0;
    med = sum / static_cast<double>(cnt);
  }
  return 1.0 / med;
}

std::vector<double> default_scale_grid(std::span<const LabeledSample> samples) {
  const double base = median_heuristic_scale(samples);
  std::vector<double> grid;
  for (int k = -4; k <= 2; ++k) grid.push_back(std::ldexp(base, k));
  return grid;
}

namespace {

std::size_t distinct_count(std::span<const LabeledSample> samples, int label) {
  std::vector<std::vector<double>> rows;
  for (const auto& s : samples)
    if (s.y == label) rows.emplace_back(s.x.data(), s.x.data() + s.x.size());
  std::sort(rows.begin(), rows.end());
  return static_cast<std::size_t>(std::unique(rows.begin(), rows.end()) - rows.begin());
}

}  // namespace

ScaleSearchResult grid_search_scale(std::span<const LabeledSample> samples, std::span<const double> grid,
                                    double C, Rng& rng, std::size_t max_samples) {
  if (grid.empty()) throw ContractViolation("grid_search_scale: empty grid");
  constexpr std::size_t folds = 5;
  if (distinct_count(samples, 1) < folds || distinct_count(samples, -1) < folds)
    return {median_heuristic_scale(samples), 0.0, true};
  if (grid.size() == 1) return {grid.front(), 0.0, false};

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < samples.size(); ++i) (samples[i].y > 0 ? pos : neg).push_back(i);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);
  const std::size_t per_class = std::max<std::size_t>(folds, max_samples / 2);
  if (pos.size() > per_class) pos.resize(per_class);
  if (neg.size() > per_class) neg.resize(per_class);

  // Stratified fold assignment, then one shuffled insertion order.
  std::vector<std::pair<std::size_t, std::size_t>> chosen;  // (sample, fold)
  for (std::size_t i = 0; i < pos.size(); ++i) chosen.emplace_back(pos[i], i % folds);
  for (std::size_t i = 0; i < neg.size(); ++i) chosen.emplace_back(neg[i], i % folds);
  std::shuffle(chosen.begin(), chosen.end(), rng);

  std::vector<double> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  ScaleSearchResult best{sorted.front(), -1.0, false};
  for (double scale : sorted) {
    std::size_t correct = 0;
    for (std::size_t f = 0; f < folds; ++f) {
      Svm svm(RbfKernel<double>(scale), C);
      for (const auto& [i, fold] : chosen)
        if (fold != f) svm.increment(samples[i]);
      for (const auto& [i, fold] : chosen)
        if (fold == f && svm.classify(samples[i].x) == samples[i].y) ++correct;
    }
    const double acc = static_cast<double>(correct) / static_cast<double>(chosen.size());
    if (acc > best.accuracy) best = {scale, acc, false};
  }
  return best;
}

std::string svm_state_json(const Svm& svm) {
  nlohmann::json j;
  j["n"] = svm.size();
  j["dim"] = svm.dim();
  j["C"] = svm.C();
  j["kernel_scale"] = svm.kernel().scale;
  j["b"] = svm.bias();
  std::vector<double> alpha(static_cast<std::size_t>(svm.size()));
  for (Eigen::Index i = 0; i < svm.size(); ++i) alpha[static_cast<std::size_t>(i)] = svm.alpha(i);
  j["alpha"] = alpha;
  j["sets"] = {{"margin", svm.margin_set().size()},
               {"error", svm.error_set().size()},
               {"remaining", svm.remaining_set().size()}};
  const KktReport rep = svm.check_invariants();
  j["residuals"] = {{"max_kkt_violation", rep.max_kkt_violation},
                    {"equality", rep.equality_residual},
                    {"inverse", rep.inverse_residual}};
  j["invariants_ok"] = rep.ok();
  return j.dump(2);
}

}  // namespace dmoea
