#include "binaryne/search.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace binaryne {

namespace {

// Bounded selection: a max-heap of (distance, node) holding the K best seen
// so far, worst on top. A candidate beats the current worst if its distance
// is smaller, or equal with a smaller node index. Replacement is a single
// sift-down so the selection overhead stays far below the distance pass.
struct HeapEntry {
  double distance;
  NodeId node;
};

// "a ranks strictly better than b"
inline bool better(const HeapEntry& a, const HeapEntry& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.node < b.node;
}

inline void sift_down_worst(std::vector<HeapEntry>& heap, std::size_t i) {
  const std::size_t n = heap.size();
  for (;;) {
    std::size_t worst = i;
    const std::size_t l = 2 * i + 1;
    const std::size_t r = l + 1;
    if (l < n && better(heap[worst], heap[l])) worst = l;
    if (r < n && better(heap[worst], heap[r])) worst = r;
    if (worst == i) return;
    std::swap(heap[i], heap[worst]);
    i = worst;
  }
}

constexpr NodeId kNoSkip = 0xffffffffu;

template <typename DistanceFn>
RankedResult scan_top_k(std::uint32_t node_count, std::uint32_t k, NodeId skip,
                        DistanceFn&& distance) {
  std::vector<HeapEntry> heap;
  heap.reserve(k);

  const auto start = std::chrono::steady_clock::now();
  NodeId v = 0;
  for (; v < node_count && heap.size() < k; ++v) {
    if (v == skip) continue;
    heap.push_back({distance(v), v});
  }
  for (std::size_t i = heap.size(); i-- > 0;) sift_down_worst(heap, i);
  HeapEntry worst = heap.front();
  for (; v < node_count; ++v) {
    if (v == skip) continue;
    const HeapEntry candidate{distance(v), v};
    if (better(candidate, worst)) {
      heap.front() = candidate;
      sift_down_worst(heap, 0);
      worst = heap.front();
    }
  }
  const auto stop = std::chrono::steady_clock::now();

  RankedResult result;
  result.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start);
  result.entries.reserve(heap.size());
  std::sort(heap.begin(), heap.end(), better);
  for (const HeapEntry& e : heap) result.entries.push_back({e.node, e.distance});
  return result;
}

void check_k(std::uint32_t k, std::uint32_t node_count, bool excludes_one) {
  const std::uint32_t limit = node_count - (excludes_one ? 1 : 0);
  if (k < 1 || node_count == 0 || k > limit) {
    throw std::out_of_range("top-k count " + std::to_string(k) + " out of range [1, " +
                            std::to_string(limit) + "]");
  }
}

}  // namespace

RankedResult top_k(const CodeMatrix& codes, const Query& query) {
  if (query.code.size() != codes.words_per_code()) {
    throw std::invalid_argument("query code width mismatch");
  }
  const bool excludes = query.exclude_self && query.self.has_value();
  check_k(query.k, codes.node_count(), excludes);
  const NodeId skip = excludes ? *query.self : kNoSkip;
  std::span<const std::uint64_t> q(query.code);
  return scan_top_k(codes.node_count(), query.k, skip, [&](NodeId v) {
    return static_cast<double>(hamming_distance(q, codes.code(v)));
  });
}

RankedResult top_k(const CodeMatrix& codes, NodeId query_node, std::uint32_t k,
                   bool exclude_self) {
  if (query_node >= codes.node_count()) throw std::out_of_range("query node out of range");
  Query q;
  std::span<const std::uint64_t> code = codes.code(query_node);
  q.code.assign(code.begin(), code.end());
  q.self = query_node;
  q.k = k;
  q.exclude_self = exclude_self;
  return top_k(codes, q);
}

RankedResult top_k_euclidean(const EmbeddingMatrix& embeddings, const EuclideanQuery& query) {
  if (query.point.size() != embeddings.dim()) {
    throw std::invalid_argument("query point width mismatch");
  }
  const bool excludes = query.exclude_self && query.self.has_value();
  check_k(query.k, embeddings.node_count(), excludes);
  const NodeId skip = excludes ? *query.self : kNoSkip;
  const double* q = query.point.data();
  const std::uint32_t dim = embeddings.dim();
  return scan_top_k(embeddings.node_count(), query.k, skip, [&](NodeId v) {
    std::span<const double> row = embeddings.row(v);
    double acc = 0.0;
    for (std::uint32_t r = 0; r < dim; ++r) {
      const double diff = q[r] - row[r];
      acc += diff * diff;
    }
    return acc;
  });
}

RankedResult top_k_euclidean(const EmbeddingMatrix& embeddings, NodeId query_node,
                             std::uint32_t k, bool exclude_self) {
  if (query_node >= embeddings.node_count()) {
    throw std::out_of_range("query node out of range");
  }
  EuclideanQuery q;
  std::span<const double> row = embeddings.row(query_node);
  q.point.assign(row.begin(), row.end());
  q.self = query_node;
  q.k = k;
  q.exclude_self = exclude_self;
  return top_k_euclidean(embeddings, q);
}

}  // namespace binaryne
