#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "binaryne/graph.hpp"

namespace binaryne {

struct WalkConfig {
  std::uint32_t walk_length = 100;    // L
  std::uint32_t walks_per_node = 40;  // gamma
  std::uint32_t window = 10;          // t
  std::uint64_t seed = 1;
  std::uint32_t threads = 1;

  void validate() const {
    if (walk_length < 1) throw std::invalid_argument("walk_length must be >= 1");
    if (walks_per_node < 1) throw std::invalid_argument("walks_per_node must be >= 1");
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  }
};

// Flat storage for gamma * |V| truncated random walks. Walk (node v, repeat
// k) sits at index v * gamma + k regardless of thread count.
class WalkSet {
 public:
  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const NodeId> walk(std::size_t w) const {
    return {nodes_.data() + offsets_[w], nodes_.data() + offsets_[w + 1]};
  }
  std::uint64_t total_steps() const { return nodes_.size(); }

  static WalkSet from_parts(std::vector<std::uint64_t> offsets, std::vector<NodeId> nodes) {
    WalkSet s;
    s.offsets_ = std::move(offsets);
    s.nodes_ = std::move(nodes);
    return s;
  }

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<NodeId> nodes_;
};

// Sparse multiset of (center, context) co-occurrence counts. Walk-harvested
// counts are symmetric; the container itself only guarantees that no
// diagonal entry is stored and that iteration order is sorted by
// (center, context).
class PairCounts {
 public:
  struct OrderedPair {
    NodeId center;
    NodeId context;
    std::uint64_t count;
  };

  PairCounts() = default;

  bool empty() const { return pairs_.empty(); }
  std::size_t distinct_ordered() const { return pairs_.size(); }
  std::uint64_t total() const { return total_; }
  const std::vector<OrderedPair>& ordered() const { return pairs_; }

  // Exact ordered lookup; 0 when the pair is absent.
  std::uint64_t count(NodeId center, NodeId context) const;

  // Sum over contexts for each center, i.e. how often each node occurs as
  // the center of a pair. Feeds the negative-sampling noise distribution.
  std::vector<std::uint64_t> center_frequencies(std::uint32_t node_count) const;

  // Merges duplicate entries; rejects diagonal pairs and zero counts.
  static PairCounts from_entries(std::vector<OrderedPair> entries);

 private:
  std::vector<OrderedPair> pairs_;  // sorted by (center, context)
  std::uint64_t total_ = 0;
};

WalkSet generate_walks(const Graph& graph, const WalkConfig& cfg);

PairCounts count_context_pairs(const WalkSet& walks, std::uint32_t window,
                               std::uint32_t threads = 1);

void save_pair_counts(const PairCounts& counts, const std::vector<std::string>& ids,
                      const std::filesystem::path& path);
void save_walks(const WalkSet& walks, const std::vector<std::string>& ids,
                const std::filesystem::path& path);

}  // namespace binaryne
