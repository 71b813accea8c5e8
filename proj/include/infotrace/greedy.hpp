#pragma once

#include "infotrace/gp.hpp"
#include "infotrace/linalg.hpp"

#include <functional>
#include <optional>

namespace infotrace {

enum class Criterion {
  info_gain_exact,
  info_loss,
  info_gain_approx,
  multi_query_exact,
  multi_query_approx,
};

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& s);

struct GreedyConfig {
  Criterion criterion = Criterion::info_gain_exact;
  Index budget = 0;
  double sigma2 = 1.0;
  std::uint64_t seed = 0;
  // Keeps a candidate when it returns true; empty = keep all. Ties are always
  // broken toward the lowest id.
  std::function<bool(std::uint64_t id, const std::optional<std::uint32_t>& label)>
      candidate_filter;
  // Route the approximate-InfoGain argmax through the retrieval backend
  // (two-query squared-inner-product emulation) instead of the full scan.
  bool use_index = false;
};

struct StepRecord {
  std::uint64_t id;
  double raw_score;      // criterion value at selection time
  double marginal_nats;  // entropy change of the step, from exact variances
};

// Incremental weight-space state: acquired set, S_A^-1 and the residual
// query r = S_A^-1 phi_*. For info_loss the precision is that of the
// retained set D \ A.
struct SelectionState {
  std::vector<std::uint64_t> acquired;
  PrecisionInverse precision_inv;
  Vector residual;
  std::vector<StepRecord> step_log;
};

struct AttributionResult {
  std::vector<std::uint64_t> selected;
  std::vector<double> per_step_score;
  std::vector<double> cumulative_nats;
  std::uint64_t config_fingerprint = 0;
};

std::uint64_t config_fingerprint(const FeatureStore& store, const GreedyConfig& cfg);

AttributionResult greedy_info_gain_exact(const FeatureStore& store, const Vector& q,
                                         const GreedyConfig& cfg,
                                         SelectionState* final_state = nullptr);

AttributionResult greedy_info_loss(const FeatureStore& store, const Vector& q,
                                   const GreedyConfig& cfg,
                                   SelectionState* final_state = nullptr);

AttributionResult greedy_info_gain_approx(const FeatureStore& store, const Vector& q,
                                          const GreedyConfig& cfg,
                                          SelectionState* final_state = nullptr);

// First-order estimate v_*^A - (1/sigma^2) (v_{x,*}^A)^2 of the post-update
// variance; exposed so the error analysis is testable on live states.
double linear_response_variance(const SelectionState& state, const Vector& phi_x, const Vector& q,
                                const NoiseModel& noise);

AttributionResult multi_query_greedy(const FeatureStore& store, const RowMatrix& qmat,
                                     const GreedyConfig& cfg,
                                     SelectionState* final_state = nullptr);

// Dispatches on cfg.criterion (multi-query criteria require a qmat).
AttributionResult attribute(const FeatureStore& store, const Vector& q, const GreedyConfig& cfg);

}  // namespace infotrace
