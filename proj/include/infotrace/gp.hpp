#pragma once

#include "infotrace/feature_store.hpp"
#include "infotrace/linalg.hpp"

#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>

namespace infotrace {

struct NoiseModel {
  double sigma2;
  explicit NoiseModel(double s) : sigma2(s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw InvalidInput("NoiseModel: sigma2 must be positive and finite");
    }
  }
};

// Ordered, duplicate-free set of example ids resolved against one store.
class ConditioningSet {
 public:
  ConditioningSet() = default;
  ConditioningSet(const FeatureStore& store, std::span<const std::uint64_t> ids);

  static ConditioningSet all(const FeatureStore& store);

  const std::vector<std::uint64_t>& ids() const { return ids_; }
  const std::vector<Index>& rows() const { return rows_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

 private:
  std::vector<std::uint64_t> ids_;
  std::vector<Index> rows_;
};

// Exact GP posterior machinery over the linear tangent-feature kernel.
// Conditioning-set Cholesky factors are cached by index-set hash; the
// full-data factor is what leave-M-out reuses across subsets.
class GpSurrogate {
 public:
  GpSurrogate(const FeatureStore& store, NoiseModel noise);

  const FeatureStore& store() const { return store_; }
  double sigma2() const { return noise_.sigma2; }

  double kernel(std::uint64_t i, std::uint64_t j) const;

  double prior_variance(const Vector& q) const;

  // k_** - k_{c,*}^T (K_c + sigma^2 I)^-1 k_{c,*}; empty set gives the prior.
  double posterior_variance(const ConditioningSet& c, const Vector& q) const;

  // v_{x,*}^c between a store row x and a raw query.
  double posterior_covariance(const ConditioningSet& c, std::uint64_t x, const Vector& q) const;

  // v_*(D \ removed) via the leave-M-out identity, reusing the full factor.
  double leave_m_out_variance(const ConditioningSet& removed, const Vector& q) const;

  double variance_full(const Vector& q) const;

 private:
  struct Factor;
  std::shared_ptr<const Factor> factor_for(const ConditioningSet& c) const;
  std::shared_ptr<const Factor> full_factor() const;
  Vector cross_kernel(const ConditioningSet& c, const Vector& q) const;
  double clamp_variance(double v) const;

  const FeatureStore& store_;
  NoiseModel noise_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, std::shared_ptr<const Factor>> cache_;
  mutable std::shared_ptr<const Factor> full_;
};

// a^T inv b (Eq. weight-space quadratic form).
double weightspace_form(const PrecisionInverse& inv, const Vector& a, const Vector& b);

// Free-function veneers over a transient surrogate.
double kernel(const FeatureStore& store, std::uint64_t i, std::uint64_t j);
double posterior_variance(const FeatureStore& store, const ConditioningSet& c, const Vector& q,
                          const NoiseModel& noise);
double posterior_covariance(const FeatureStore& store, const ConditioningSet& c, std::uint64_t x,
                            const Vector& q, const NoiseModel& noise);
double leave_m_out_variance(const FeatureStore& store, const ConditioningSet& removed,
                            const Vector& q, const NoiseModel& noise);

}  // namespace infotrace
