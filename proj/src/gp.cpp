#include "infotrace/gp.hpp"

#include <algorithm>
#include <iostream>
#include <unordered_set>

namespace infotrace {

namespace {

// Raw posterior variances in (-1e-9, 0) are round-off and clamp to zero;
// anything lower signals a logic error.
constexpr double kVarianceFloor = -1e-9;

std::uint64_t hash_rows(const std::vector<Index>& rows) {
  std::vector<Index> sorted(rows);
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = kFnvOffset;
  for (Index r : sorted) h = fnv1a_u64(static_cast<std::uint64_t>(r), h);
  return h;
}

}  // namespace

ConditioningSet::ConditioningSet(const FeatureStore& store, std::span<const std::uint64_t> ids) {
  ids_.assign(ids.begin(), ids.end());
  rows_.reserve(ids_.size());
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(ids_.size());
  for (auto id : ids_) {
    if (!seen.insert(id).second) {
      throw InvalidInput("conditioning set: duplicate id " + std::to_string(id));
    }
    rows_.push_back(store.row_of(id));
  }
}

ConditioningSet ConditioningSet::all(const FeatureStore& store) {
  return ConditioningSet(store, store.ids());
}

struct GpSurrogate::Factor {
  std::vector<Index> rows;       // store rows in set order
  Eigen::LLT<Matrix> llt;        // factor of K_c + sigma^2 I
};

GpSurrogate::GpSurrogate(const FeatureStore& store, NoiseModel noise)
    : store_(store), noise_(noise) {}

double GpSurrogate::kernel(std::uint64_t i, std::uint64_t j) const {
  return store_.rows().row(store_.row_of(i)).dot(store_.rows().row(store_.row_of(j)));
}

double GpSurrogate::prior_variance(const Vector& q) const {
  if (q.size() != store_.k()) {
    throw DimensionMismatch("query has dimension " + std::to_string(q.size()) + ", store has " +
                            std::to_string(store_.k()));
  }
  return q.squaredNorm();
}

std::shared_ptr<const GpSurrogate::Factor> GpSurrogate::factor_for(const ConditioningSet& c) const {
  const std::uint64_t key = hash_rows(c.rows());
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = cache_.find(key);
    if (it != cache_.end() && it->second->rows == c.rows()) return it->second;
  }
  const auto m = static_cast<Index>(c.size());
  Matrix gram(m, m);
  for (Index a = 0; a < m; ++a) {
    const auto ra = c.rows()[static_cast<std::size_t>(a)];
    for (Index b = 0; b <= a; ++b) {
      const auto rb = c.rows()[static_cast<std::size_t>(b)];
      const double v = store_.rows().row(ra).dot(store_.rows().row(rb));
      gram(a, b) = v;
      gram(b, a) = v;
    }
  }
  gram.diagonal().array() += noise_.sigma2;
  auto factor = std::make_shared<Factor>();
  factor->rows = c.rows();
  factor->llt = chol_factor(gram);
  std::lock_guard<std::mutex> lock(mu_);
  if (cache_.size() > 256) cache_.clear();
  cache_.emplace(key, factor);
  return factor;
}

std::shared_ptr<const GpSurrogate::Factor> GpSurrogate::full_factor() const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (full_) return full_;
  }
  Matrix gram = store_.rows() * store_.rows().transpose();
  gram = 0.5 * (gram + gram.transpose()).eval();
  gram.diagonal().array() += noise_.sigma2;
  auto factor = std::make_shared<Factor>();
  factor->rows.resize(static_cast<std::size_t>(store_.n()));
  for (Index i = 0; i < store_.n(); ++i) factor->rows[static_cast<std::size_t>(i)] = i;
  factor->llt = chol_factor(gram);
  std::lock_guard<std::mutex> lock(mu_);
  if (!full_) full_ = factor;
  return full_;
}

Vector GpSurrogate::cross_kernel(const ConditioningSet& c, const Vector& q) const {
  Vector k(static_cast<Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    k[static_cast<Index>(i)] = store_.rows().row(c.rows()[i]).dot(q);
  }
  return k;
}

double GpSurrogate::clamp_variance(double v) const {
  if (v < kVarianceFloor) {
    throw NegativeVariance("posterior variance " + format_double(v) +
                           " is below the round-off floor");
  }
  if (v < 0.0) {
    std::cerr << "infotrace: warning: clamping posterior variance " << format_double(v)
              << " to 0\n";
    return 0.0;
  }
  return v;
}

double GpSurrogate::posterior_variance(const ConditioningSet& c, const Vector& q) const {
  const double prior = prior_variance(q);
  if (c.empty()) return prior;
  // Full-store sets share the cached full factor; this also makes
  // info_loss(D) == info_gain(D) bit-exact (same variance path).
  if (static_cast<Index>(c.size()) == store_.n()) return variance_full(q);
  const auto factor = factor_for(c);
  const Vector kq = cross_kernel(c, q);
  return clamp_variance(prior - kq.dot(factor->llt.solve(kq)));
}

double GpSurrogate::posterior_covariance(const ConditioningSet& c, std::uint64_t x,
                                         const Vector& q) const {
  const Index row = store_.row_of(x);
  const double kxq = store_.rows().row(row).dot(q);
  if (c.empty()) return kxq;
  const auto factor = factor_for(c);
  const Vector kq = cross_kernel(c, q);
  const Vector kx = cross_kernel(c, store_.row_vector(row));
  return kxq - kx.dot(factor->llt.solve(kq));
}

double GpSurrogate::variance_full(const Vector& q) const {
  const double prior = prior_variance(q);
  const auto factor = full_factor();
  Vector kq(store_.n());
  kq.noalias() = store_.rows() * q;
  return clamp_variance(prior - kq.dot(factor->llt.solve(kq)));
}

double GpSurrogate::leave_m_out_variance(const ConditioningSet& removed, const Vector& q) const {
  if (removed.empty()) return variance_full(q);
  if (static_cast<Index>(removed.size()) == store_.n()) return prior_variance(q);

  const auto factor = full_factor();
  Vector kq(store_.n());
  kq.noalias() = store_.rows() * q;
  const Vector w = factor->llt.solve(kq);  // K_y^-1 k_{D*}
  const double v_full = clamp_variance(prior_variance(q) - kq.dot(w));

  const auto m = static_cast<Index>(removed.size());
  // Columns of K_y^-1 at the removed indices give [K_y^-1]_{S,S}.
  Matrix rhs = Matrix::Zero(store_.n(), m);
  Vector ws(m);
  for (Index j = 0; j < m; ++j) {
    const Index row = removed.rows()[static_cast<std::size_t>(j)];
    rhs(row, j) = 1.0;
    ws[j] = w[row];
  }
  const Matrix cols = factor->llt.solve(rhs);
  Matrix kinv_ss(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      kinv_ss(i, j) = cols(removed.rows()[static_cast<std::size_t>(i)], j);
    }
  }
  kinv_ss = 0.5 * (kinv_ss + kinv_ss.transpose()).eval();
  const Vector t = chol_factor(kinv_ss).solve(ws);
  return clamp_variance(v_full + ws.dot(t));
}

double weightspace_form(const PrecisionInverse& inv, const Vector& a, const Vector& b) {
  if (a.size() != inv.dim() || b.size() != inv.dim()) {
    throw DimensionMismatch("weightspace_form: vector sizes do not match precision dim");
  }
  return a.dot(inv.mat() * b);
}

double kernel(const FeatureStore& store, std::uint64_t i, std::uint64_t j) {
  return store.rows().row(store.row_of(i)).dot(store.rows().row(store.row_of(j)));
}

double posterior_variance(const FeatureStore& store, const ConditioningSet& c, const Vector& q,
                          const NoiseModel& noise) {
  return GpSurrogate(store, noise).posterior_variance(c, q);
}

double posterior_covariance(const FeatureStore& store, const ConditioningSet& c, std::uint64_t x,
                            const Vector& q, const NoiseModel& noise) {
  return GpSurrogate(store, noise).posterior_covariance(c, x, q);
}

double leave_m_out_variance(const FeatureStore& store, const ConditioningSet& removed,
                            const Vector& q, const NoiseModel& noise) {
  return GpSurrogate(store, noise).leave_m_out_variance(removed, q);
}

}  // namespace infotrace
