#pragma once

#include "infotrace/common.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace infotrace {

enum class SketchFamily { rademacher, gaussian };
enum class StoreFormat { tfs, csv };

std::string to_string(SketchFamily f);
SketchFamily sketch_family_from_string(const std::string& s);

// Random-projection sketch: rows map to (1/sqrt(K)) * A * row^T with
// A in R^{KxP} drawn entrywise from the counter generator; entry (r, c)
// uses counter r*P + c, so A is never stored and regenerates identically
// in blocks of any size.
struct SketchConfig {
  Index target_dim = 0;
  SketchFamily family = SketchFamily::rademacher;
  std::uint64_t seed = 0;
};

// N x K tangent-feature matrix with per-row ids and optional class labels.
class FeatureStore {
 public:
  FeatureStore(RowMatrix rows, std::vector<std::uint64_t> ids,
               std::optional<std::vector<std::uint32_t>> labels = std::nullopt);

  Index n() const { return rows_.rows(); }
  Index k() const { return rows_.cols(); }
  const RowMatrix& rows() const { return rows_; }
  const std::vector<std::uint64_t>& ids() const { return ids_; }
  const std::optional<std::vector<std::uint32_t>>& labels() const { return labels_; }

  bool has_id(std::uint64_t id) const { return index_.count(id) != 0; }
  Index row_of(std::uint64_t id) const;
  Vector row_vector(Index row) const { return rows_.row(row).transpose(); }

  // FNV digest over the canonical 64-bit TFS serialization.
  std::uint64_t digest() const;

 private:
  RowMatrix rows_;
  std::vector<std::uint64_t> ids_;
  std::optional<std::vector<std::uint32_t>> labels_;
  std::unordered_map<std::uint64_t, Index> index_;
};

FeatureStore load_store(const std::string& path, StoreFormat format);
// dtype32 narrows values to 32-bit reals in the TFS container (loading widens back).
void save_store(const FeatureStore& store, const std::string& path, StoreFormat format,
                bool dtype32 = false);

// Core sketch kernel; deterministic in (source, cfg), rows independent.
RowMatrix sketch_matrix(const RowMatrix& source, const SketchConfig& cfg);

// Sketches a store's rows, carrying ids and labels through.
FeatureStore sketch_features(const FeatureStore& source, const SketchConfig& cfg);

// Loads a query matrix: TFS/CSV stores are accepted; rows are the queries.
RowMatrix load_query_matrix(const std::string& path, StoreFormat format);

// Parses an inline comma-separated vector.
Vector parse_inline_vector(const std::string& csv);

}  // namespace infotrace
