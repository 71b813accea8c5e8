#include "infotrace/criteria.hpp"

#include <cmath>

namespace infotrace {

namespace {

constexpr double kScoreFloor = -1e-10;
constexpr double kReferenceTol = 1e-12;

// Both criteria are mathematically >= 0; tiny negatives are round-off.
double clamp_nats(double v, const char* what) {
  if (v < kScoreFloor) {
    throw NegativeVariance(std::string(what) + ": score " + format_double(v) +
                           " below tolerance, conditioning produced inconsistent variances");
  }
  return v < 0.0 ? 0.0 : v;
}

double require_prior(const GpSurrogate& gp, const Vector& q, const char* what) {
  const double prior = gp.prior_variance(q);
  if (!(prior > 0.0)) {
    throw ZeroPriorVariance(std::string(what) + ": query has zero norm");
  }
  return prior;
}

}  // namespace

double info_gain(const GpSurrogate& gp, const ConditioningSet& s, const Vector& q) {
  const double prior = require_prior(gp, q, "info_gain");
  if (s.empty()) return 0.0;
  const double v = gp.posterior_variance(s, q);
  // -1/2 log(v/k_**) written as a log difference so the complement identity
  // with info_loss holds bit-for-bit.
  return clamp_nats(0.5 * (std::log(prior) - std::log(v)), "info_gain");
}

double info_loss(const GpSurrogate& gp, const ConditioningSet& s, const Vector& q) {
  if (s.empty()) return 0.0;
  const double retained = gp.leave_m_out_variance(s, q);
  const double full = gp.variance_full(q);
  return clamp_nats(0.5 * (std::log(retained) - std::log(full)), "info_loss");
}

double high_noise_leading_term(const GpSurrogate& gp, const ConditioningSet& s, const Vector& q) {
  const double prior = require_prior(gp, q, "high_noise_leading_term");
  double a = 0.0;
  for (Index row : s.rows()) {
    const double c = gp.store().rows().row(row).dot(q);
    a += c * c;
  }
  return a / (2.0 * prior * gp.sigma2());
}

double relative_information(const GpSurrogate& gp, const ConditioningSet& s_method,
                            const ConditioningSet& s_ref, const Vector& q) {
  if (s_method.size() != s_ref.size()) {
    throw InvalidInput("relative_information: subset sizes differ (" +
                       std::to_string(s_method.size()) + " vs " + std::to_string(s_ref.size()) +
                       ")");
  }
  const double ref = info_loss(gp, s_ref, q);
  if (!(ref > kReferenceTol)) {
    throw DegenerateReference("relative_information: reference info_loss " + format_double(ref) +
                              " is at or below tolerance");
  }
  return info_loss(gp, s_method, q) / ref;
}

double relatif_cosine(const GpSurrogate& gp, std::uint64_t x, const Vector& q) {
  const auto all = ConditioningSet::all(gp.store());
  const double v_query = gp.variance_full(q);
  const double v_self = gp.variance_full(gp.store().row_vector(gp.store().row_of(x)));
  if (!(v_query > 0.0) || !(v_self > 0.0)) {
    throw ZeroVariance("relatif_cosine: a marginal variance is zero");
  }
  const double cov = gp.posterior_covariance(all, x, q);
  const double c = cov / (std::sqrt(v_query) * std::sqrt(v_self));
  return std::min(1.0, std::max(-1.0, c));
}

}  // namespace infotrace
