#include "infotrace/retrieval.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace infotrace {

namespace {

bool ranked_before(const RankedItem& a, const RankedItem& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

RankedList scan_top_k(const FeatureStore& store, const Vector& q, std::size_t k,
                      const IdMask* mask, bool squared) {
  if (q.size() != store.k()) {
    throw DimensionMismatch("query dimension does not match index");
  }
  if (k > static_cast<std::size_t>(store.n())) {
    throw InvalidInput("top-k: k " + std::to_string(k) + " exceeds index size " +
                       std::to_string(store.n()));
  }
  std::vector<double> scores(static_cast<std::size_t>(store.n()));
  parallel_for(store.n(), [&](Index begin, Index end) {
    for (Index i = begin; i < end; ++i) {
      const double dot = store.rows().row(i).dot(q);
      scores[static_cast<std::size_t>(i)] = squared ? dot * dot : dot;
    }
  });
  RankedList out;
  out.items.reserve(scores.size());
  for (Index i = 0; i < store.n(); ++i) {
    if (mask && mask->is_masked(i)) continue;
    out.items.push_back({store.ids()[static_cast<std::size_t>(i)],
                         scores[static_cast<std::size_t>(i)]});
  }
  std::sort(out.items.begin(), out.items.end(), ranked_before);
  if (out.items.size() > k) out.items.resize(k);
  return out;
}

}  // namespace

RankedList FlatIndex::top_k_ip(const Vector& q, std::size_t k, const IdMask* mask) const {
  return scan_top_k(store_, q, k, mask, /*squared=*/false);
}

RankedList FlatIndex::top_k_squared_ip(const Vector& q, std::size_t k, const IdMask* mask) const {
  return scan_top_k(store_, q, k, mask, /*squared=*/true);
}

RankedList topk_squared_ip_two_query(const MipsBackend& backend, const Vector& q, std::size_t k,
                                     const IdMask* mask) {
  const RankedList pos = backend.top_k_ip(q, k, mask);
  const RankedList neg = backend.top_k_ip(-q, k, mask);
  // Union of the two candidate lists, re-scored by the squared inner product.
  std::map<std::uint64_t, double> merged;
  for (const auto& it : pos.items) merged[it.id] = it.score * it.score;
  for (const auto& it : neg.items) merged[it.id] = it.score * it.score;
  RankedList out;
  out.items.reserve(merged.size());
  for (const auto& [id, score] : merged) out.items.push_back({id, score});
  std::sort(out.items.begin(), out.items.end(), ranked_before);
  if (out.items.size() > k) out.items.resize(k);
  return out;
}

double recall_at_k(const RankedList& rank, const std::set<std::uint64_t>& truth, std::size_t k) {
  if (truth.empty()) throw EmptyTruth("recall_at_k: ground-truth set is empty");
  std::size_t hits = 0;
  const std::size_t depth = std::min(k, rank.items.size());
  for (std::size_t i = 0; i < depth; ++i) {
    if (truth.count(rank.items[i].id)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double mrr_at_k(const RankedList& rank, const std::set<std::uint64_t>& truth, std::size_t k) {
  if (truth.empty()) throw EmptyTruth("mrr_at_k: ground-truth set is empty");
  const std::size_t depth = std::min(k, rank.items.size());
  for (std::size_t i = 0; i < depth; ++i) {
    if (truth.count(rank.items[i].id)) {
      return 1.0 / static_cast<double>(i + 1);
    }
  }
  return 0.0;
}

void write_rankings_csv(const std::string& path,
                        const std::vector<std::pair<std::uint64_t, RankedList>>& per_query,
                        std::uint64_t fingerprint) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("rankings: cannot write " + path);
  out << "# fingerprint=" << format_hex64(fingerprint) << "\n";
  out << "query_id,rank,example_id,score\n";
  for (const auto& [qid, list] : per_query) {
    for (std::size_t i = 0; i < list.items.size(); ++i) {
      out << qid << ',' << (i + 1) << ',' << list.items[i].id << ','
          << format_double(list.items[i].score) << "\n";
    }
  }
}

std::vector<std::pair<std::uint64_t, RankedList>> load_rankings_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("rankings: cannot open " + path);
  std::vector<std::pair<std::uint64_t, RankedList>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("query_id", 0) == 0) continue;
    std::stringstream ss(line);
    std::string qid_s, rank_s, id_s, score_s;
    if (!std::getline(ss, qid_s, ',') || !std::getline(ss, rank_s, ',') ||
        !std::getline(ss, id_s, ',') || !std::getline(ss, score_s, ',')) {
      throw InvalidInput("rankings: malformed line " + std::to_string(lineno));
    }
    try {
      const std::uint64_t qid = std::stoull(qid_s);
      const std::uint64_t id = std::stoull(id_s);
      const double score = std::stod(score_s);
      if (out.empty() || out.back().first != qid) out.push_back({qid, RankedList{}});
      out.back().second.items.push_back({id, score});
    } catch (const std::logic_error&) {
      throw InvalidInput("rankings: unparsable line " + std::to_string(lineno));
    }
  }
  return out;
}

std::vector<std::pair<std::uint64_t, std::set<std::uint64_t>>> load_ground_truth_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("ground truth: cannot open " + path);
  std::vector<std::pair<std::uint64_t, std::set<std::uint64_t>>> out;
  std::map<std::uint64_t, std::size_t> pos;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("query_id", 0) == 0) continue;
    std::stringstream ss(line);
    std::string qid_s, id_s;
    if (!std::getline(ss, qid_s, ',') || !std::getline(ss, id_s, ',')) {
      throw InvalidInput("ground truth: malformed line " + std::to_string(lineno));
    }
    try {
      const std::uint64_t qid = std::stoull(qid_s);
      const std::uint64_t id = std::stoull(id_s);
      auto it = pos.find(qid);
      if (it == pos.end()) {
        pos.emplace(qid, out.size());
        out.push_back({qid, {}});
        it = pos.find(qid);
      }
      out[it->second].second.insert(id);
    } catch (const std::logic_error&) {
      throw InvalidInput("ground truth: unparsable line " + std::to_string(lineno));
    }
  }
  return out;
}

void write_ground_truth_csv(
    const std::string& path,
    const std::vector<std::pair<std::uint64_t, std::set<std::uint64_t>>>& truth) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("ground truth: cannot write " + path);
  out << "query_id,example_id\n";
  for (const auto& [qid, ids] : truth) {
    for (auto id : ids) out << qid << ',' << id << "\n";
  }
}

}  // namespace infotrace
