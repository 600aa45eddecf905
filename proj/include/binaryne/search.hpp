#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "binaryne/codes.hpp"

namespace binaryne {

// Top-K answers ordered by non-decreasing distance, ties broken by
// ascending node index. For Hamming queries the distance is an integer in
// [0, d]. elapsed covers only the distance + selection pass.
struct RankedResult {
  struct Entry {
    NodeId node;
    double distance;
  };
  std::vector<Entry> entries;
  std::chrono::nanoseconds elapsed{0};
};

struct Query {
  std::vector<std::uint64_t> code;   // packed, canonical zero tail
  std::optional<NodeId> self;        // set when the query is a stored node
  std::uint32_t k = 10;
  bool exclude_self = true;          // only effective when self is set
};

// Popcount-over-XOR Hamming distance between equal-length packed codes.
inline std::uint32_t hamming_distance(std::span<const std::uint64_t> a,
                                      std::span<const std::uint64_t> b) {
  std::uint32_t dist = 0;
  for (std::size_t w = 0; w < a.size(); ++w) dist += std::popcount(a[w] ^ b[w]);
  return dist;
}

// Exhaustive scan with a bounded max-heap of size K; no full sort.
RankedResult top_k(const CodeMatrix& codes, const Query& query);
RankedResult top_k(const CodeMatrix& codes, NodeId query_node, std::uint32_t k,
                   bool exclude_self = true);

// Dense row-major real matrix, the Euclidean reference scorer operates on.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::uint32_t node_count, std::uint32_t dim)
      : node_count_(node_count), dim_(dim), data_(std::size_t(node_count) * dim, 0.0) {}

  std::uint32_t node_count() const { return node_count_; }
  std::uint32_t dim() const { return dim_; }
  std::span<double> row(NodeId v) { return {data_.data() + std::size_t(v) * dim_, dim_}; }
  std::span<const double> row(NodeId v) const {
    return {data_.data() + std::size_t(v) * dim_, dim_};
  }

 private:
  std::uint32_t node_count_ = 0;
  std::uint32_t dim_ = 0;
  std::vector<double> data_;
};

struct EuclideanQuery {
  std::vector<double> point;
  std::optional<NodeId> self;
  std::uint32_t k = 10;
  bool exclude_self = true;
};

// Same contract as top_k with squared Euclidean distance and the same tie
// rule; the reference scorer for speed comparisons against the bit-packed
// kernel.
RankedResult top_k_euclidean(const EmbeddingMatrix& embeddings, const EuclideanQuery& query);
RankedResult top_k_euclidean(const EmbeddingMatrix& embeddings, NodeId query_node,
                             std::uint32_t k, bool exclude_self = true);

}  // namespace binaryne
