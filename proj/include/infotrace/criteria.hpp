#pragma once

#include "infotrace/gp.hpp"

namespace infotrace {

// All scores are in nats (natural log throughout).

// Entropy reduction at the query when training only on s:
// -1/2 * log(v_*(s) / k_**); 0 for the empty set.
double info_gain(const GpSurrogate& gp, const ConditioningSet& s, const Vector& q);

// Entropy increase at the query when s is withheld:
// 1/2 * log(v_*(D \ s) / v_*(D)); 0 for the empty set.
double info_loss(const GpSurrogate& gp, const ConditioningSet& s, const Vector& q);

// Shared high-noise leading term of both criteria:
// sum_{x in s} (phi_x^T q)^2 / (2 k_** sigma^2).
double high_noise_leading_term(const GpSurrogate& gp, const ConditioningSet& s, const Vector& q);

// info_loss(s_method) / info_loss(s_ref); the fraction of reference nats
// recovered. Values slightly above 1 are legal (greedy reference is not
// optimal).
double relative_information(const GpSurrogate& gp, const ConditioningSet& s_method,
                            const ConditioningSet& s_ref, const Vector& q);

// Unsigned RelatIF-style cosine conditioned on the full store:
// v_{x,*}^D / sqrt(v_*^D v_x^D), in [-1, 1].
double relatif_cosine(const GpSurrogate& gp, std::uint64_t x, const Vector& q);

}  // namespace infotrace
