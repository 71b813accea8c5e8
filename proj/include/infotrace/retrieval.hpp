#pragma once

#include "infotrace/feature_store.hpp"

#include <set>
#include <string>
#include <vector>

namespace infotrace {

struct RankedItem {
  std::uint64_t id;
  double score;
};

// Strictly sorted by (score desc, id asc).
struct RankedList {
  std::vector<RankedItem> items;
};

// Rows excluded from a query, by store row index.
class IdMask {
 public:
  explicit IdMask(Index n) : masked_(static_cast<std::size_t>(n), 0) {}

  void mask_row(Index row) { masked_[static_cast<std::size_t>(row)] = 1; }
  bool is_masked(Index row) const { return masked_[static_cast<std::size_t>(row)] != 0; }

 private:
  std::vector<char> masked_;
};

// Query contract an approximate backend would have to honor: build once,
// answer vanilla inner-product top-k with optional id masking.
class MipsBackend {
 public:
  virtual ~MipsBackend() = default;
  virtual Index size() const = 0;
  virtual RankedList top_k_ip(const Vector& q, std::size_t k, const IdMask* mask) const = 0;
};

// Exact flat scan over a feature store.
class FlatIndex : public MipsBackend {
 public:
  explicit FlatIndex(const FeatureStore& store) : store_(store) {}

  Index size() const override { return store_.n(); }
  RankedList top_k_ip(const Vector& q, std::size_t k, const IdMask* mask = nullptr) const override;

  // Direct squared scan; the reference the two-query path must match.
  RankedList top_k_squared_ip(const Vector& q, std::size_t k, const IdMask* mask = nullptr) const;

  const FeatureStore& store() const { return store_; }

 private:
  const FeatureStore& store_;
};

// Squared-inner-product top-k emulated with two vanilla queries (r and -r),
// merged, deduped and re-ranked by squared score. Returns lists identical to
// FlatIndex::top_k_squared_ip.
RankedList topk_squared_ip_two_query(const MipsBackend& backend, const Vector& q, std::size_t k,
                                     const IdMask* mask = nullptr);

// |top-k of rank intersect truth| / |truth|.
double recall_at_k(const RankedList& rank, const std::set<std::uint64_t>& truth, std::size_t k);

// 1/r* for the first relevant id at rank r* <= k, else 0.
double mrr_at_k(const RankedList& rank, const std::set<std::uint64_t>& truth, std::size_t k);

// CSV interchange: query_id,rank,example_id,score (rankings) and
// query_id,example_id (ground truth).
void write_rankings_csv(const std::string& path,
                        const std::vector<std::pair<std::uint64_t, RankedList>>& per_query,
                        std::uint64_t fingerprint);
std::vector<std::pair<std::uint64_t, RankedList>> load_rankings_csv(const std::string& path);
std::vector<std::pair<std::uint64_t, std::set<std::uint64_t>>> load_ground_truth_csv(
    const std::string& path);
void write_ground_truth_csv(
    const std::string& path,
    const std::vector<std::pair<std::uint64_t, std::set<std::uint64_t>>>& truth);

}  // namespace infotrace
