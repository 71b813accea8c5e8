#include "infotrace/feature_store.hpp"

#include "infotrace/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace infotrace {

namespace {

constexpr char kMagic[4] = {'T', 'F', 'S', '1'};
constexpr Index kSketchBlock = 256;  // columns of A materialized at a time

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const char* what) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError(std::string("tfs: truncated file while reading ") + what);
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) fields.push_back(cur);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

FeatureStore load_tfs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("tfs: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw BadMagic("tfs: bad magic in " + path);
  }
  const auto dtype = read_pod<std::uint8_t>(in, "dtype");
  if (dtype != 0 && dtype != 1) {
    throw InvalidInput("tfs: unknown dtype " + std::to_string(dtype));
  }
  const auto n = read_pod<std::uint64_t>(in, "N");
  const auto k = read_pod<std::uint64_t>(in, "K");
  if (n == 0 || k == 0) throw DimensionMismatch("tfs: N and K must be >= 1");
  const auto has_labels = read_pod<std::uint8_t>(in, "has_labels");

  RowMatrix rows(static_cast<Index>(n), static_cast<Index>(k));
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < k; ++j) {
      double v;
      if (dtype == 0) {
        v = static_cast<double>(read_pod<float>(in, "values"));
      } else {
        v = read_pod<double>(in, "values");
      }
      if (!std::isfinite(v)) {
        throw NonFiniteValue("tfs: non-finite value at row " + std::to_string(i));
      }
      rows(static_cast<Index>(i), static_cast<Index>(j)) = v;
    }
  }
  std::optional<std::vector<std::uint32_t>> labels;
  if (has_labels) {
    std::vector<std::uint32_t> lab(n);
    for (auto& l : lab) l = read_pod<std::uint32_t>(in, "labels");
    labels = std::move(lab);
  }
  std::vector<std::uint64_t> ids(n);
  for (auto& id : ids) id = read_pod<std::uint64_t>(in, "ids");
  return FeatureStore(std::move(rows), std::move(ids), std::move(labels));
}

void save_tfs(const FeatureStore& store, const std::string& path, bool dtype32) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("tfs: cannot write " + path);
  out.write(kMagic, 4);
  write_pod<std::uint8_t>(out, dtype32 ? 0 : 1);
  write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(store.n()));
  write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(store.k()));
  write_pod<std::uint8_t>(out, store.labels() ? 1 : 0);
  for (Index i = 0; i < store.n(); ++i) {
    for (Index j = 0; j < store.k(); ++j) {
      if (dtype32) {
        write_pod<float>(out, static_cast<float>(store.rows()(i, j)));
      } else {
        write_pod<double>(out, store.rows()(i, j));
      }
    }
  }
  if (store.labels()) {
    for (auto l : *store.labels()) write_pod<std::uint32_t>(out, l);
  }
  for (auto id : store.ids()) write_pod<std::uint64_t>(out, id);
  if (!out) throw IoError("tfs: write failed for " + path);
}

FeatureStore load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("csv: empty file " + path);
  const auto header = split_csv_line(line);
  if (header.empty() || trimmed(header[0]) != "id") {
    throw InvalidInput("csv: header must start with an 'id' column");
  }
  const bool has_label = header.size() > 1 && trimmed(header[1]) == "label";
  const std::size_t feat_begin = has_label ? 2 : 1;
  if (header.size() <= feat_begin) {
    throw DimensionMismatch("csv: header declares no feature columns");
  }
  const std::size_t width = header.size();
  const Index k = static_cast<Index>(width - feat_begin);

  std::vector<std::uint64_t> ids;
  std::vector<std::uint32_t> labels;
  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trimmed(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != width) {
      throw DimensionMismatch("csv: row " + std::to_string(row) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(width));
    }
    try {
      ids.push_back(std::stoull(trimmed(fields[0])));
      if (has_label) labels.push_back(static_cast<std::uint32_t>(std::stoul(trimmed(fields[1]))));
      for (std::size_t j = feat_begin; j < width; ++j) {
        const double v = std::stod(trimmed(fields[j]));
        values.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw InvalidInput("csv: unparsable number at row " + std::to_string(row));
    }
    if (!std::all_of(values.end() - k, values.end(), [](double v) { return std::isfinite(v); })) {
      throw NonFiniteValue("csv: non-finite value at row " + std::to_string(row));
    }
    ++row;
  }
  if (row == 0) throw DimensionMismatch("csv: no data rows in " + path);
  RowMatrix rows(static_cast<Index>(row), k);
  std::copy(values.begin(), values.end(), rows.data());
  std::optional<std::vector<std::uint32_t>> lab;
  if (has_label) lab = std::move(labels);
  return FeatureStore(std::move(rows), std::move(ids), std::move(lab));
}

void save_csv(const FeatureStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("csv: cannot write " + path);
  out << "id";
  if (store.labels()) out << ",label";
  for (Index j = 0; j < store.k(); ++j) out << ",f" << j;
  out << "\n";
  for (Index i = 0; i < store.n(); ++i) {
    out << store.ids()[static_cast<std::size_t>(i)];
    if (store.labels()) out << ',' << (*store.labels())[static_cast<std::size_t>(i)];
    for (Index j = 0; j < store.k(); ++j) out << ',' << format_double(store.rows()(i, j));
    out << "\n";
  }
}

}  // namespace

std::string to_string(SketchFamily f) {
  return f == SketchFamily::rademacher ? "rademacher" : "gaussian";
}

SketchFamily sketch_family_from_string(const std::string& s) {
  if (s == "rademacher") return SketchFamily::rademacher;
  if (s == "gaussian") return SketchFamily::gaussian;
  throw InvalidInput("unknown sketch family: " + s);
}

FeatureStore::FeatureStore(RowMatrix rows, std::vector<std::uint64_t> ids,
                           std::optional<std::vector<std::uint32_t>> labels)
    : rows_(std::move(rows)), ids_(std::move(ids)), labels_(std::move(labels)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) {
    throw DimensionMismatch("feature store requires n >= 1 and k >= 1");
  }
  if (static_cast<Index>(ids_.size()) != rows_.rows()) {
    throw DimensionMismatch("feature store: " + std::to_string(ids_.size()) + " ids for " +
                            std::to_string(rows_.rows()) + " rows");
  }
  if (labels_ && static_cast<Index>(labels_->size()) != rows_.rows()) {
    throw DimensionMismatch("feature store: label count does not match row count");
  }
  if (!rows_.allFinite()) {
    for (Index i = 0; i < rows_.rows(); ++i) {
      if (!rows_.row(i).allFinite()) {
        throw NonFiniteValue("feature store: non-finite value at row " + std::to_string(i));
      }
    }
  }
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], static_cast<Index>(i)).second) {
      throw InvalidInput("feature store: duplicate id " + std::to_string(ids_[i]));
    }
  }
}

Index FeatureStore::row_of(std::uint64_t id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw UnknownId("unknown example id " + std::to_string(id));
  return it->second;
}

std::uint64_t FeatureStore::digest() const {
  std::uint64_t h = kFnvOffset;
  h = fnv1a_u64(static_cast<std::uint64_t>(n()), h);
  h = fnv1a_u64(static_cast<std::uint64_t>(k()), h);
  h = fnv1a(rows_.data(), sizeof(double) * static_cast<std::size_t>(rows_.size()), h);
  h = fnv1a(ids_.data(), sizeof(std::uint64_t) * ids_.size(), h);
  if (labels_) h = fnv1a(labels_->data(), sizeof(std::uint32_t) * labels_->size(), h);
  return h;
}

FeatureStore load_store(const std::string& path, StoreFormat format) {
  return format == StoreFormat::tfs ? load_tfs(path) : load_csv(path);
}

void save_store(const FeatureStore& store, const std::string& path, StoreFormat format,
                bool dtype32) {
  if (format == StoreFormat::tfs) {
    save_tfs(store, path, dtype32);
  } else {
    save_csv(store, path);
  }
}

RowMatrix sketch_matrix(const RowMatrix& source, const SketchConfig& cfg) {
  const Index p = source.cols();
  const Index k = cfg.target_dim;
  if (k < 1) throw InvalidInput("sketch: target_dim must be >= 1");
  if (k > p) {
    throw DimensionMismatch("sketch: target_dim " + std::to_string(k) +
                            " exceeds source dimension " + std::to_string(p));
  }
  RowMatrix out = RowMatrix::Zero(source.rows(), k);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));

  // Column blocks of A are regenerated on the fly. Each output row is
  // accumulated with its own gemv in fixed block order, so results do not
  // depend on worker partitioning.
  parallel_for(source.rows(), [&](Index row_begin, Index row_end) {
    Matrix block(k, kSketchBlock);
    for (Index c0 = 0; c0 < p; c0 += kSketchBlock) {
      const Index bc = std::min(kSketchBlock, p - c0);
      for (Index r = 0; r < k; ++r) {
        const std::uint64_t base = static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(p);
        for (Index c = 0; c < bc; ++c) {
          const std::uint64_t idx = base + static_cast<std::uint64_t>(c0 + c);
          block(r, c) = cfg.family == SketchFamily::rademacher
                            ? rng::rademacher(cfg.seed, idx)
                            : rng::gaussian(cfg.seed, idx);
        }
      }
      for (Index i = row_begin; i < row_end; ++i) {
        out.row(i).transpose().noalias() +=
            block.leftCols(bc) * source.row(i).segment(c0, bc).transpose();
      }
    }
  });
  out *= scale;
  return out;
}

FeatureStore sketch_features(const FeatureStore& source, const SketchConfig& cfg) {
  return FeatureStore(sketch_matrix(source.rows(), cfg), source.ids(), source.labels());
}

RowMatrix load_query_matrix(const std::string& path, StoreFormat format) {
  return load_store(path, format).rows();
}

Vector parse_inline_vector(const std::string& csv) {
  const auto fields = split_csv_line(csv);
  if (fields.empty()) throw InvalidInput("inline vector: empty");
  Vector v(static_cast<Index>(fields.size()));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    try {
      v[static_cast<Index>(i)] = std::stod(trimmed(fields[i]));
    } catch (const std::logic_error&) {
      throw InvalidInput("inline vector: unparsable entry '" + fields[i] + "'");
    }
  }
  if (!v.allFinite()) throw NonFiniteValue("inline vector: non-finite entry");
  return v;
}

}  // namespace infotrace
