#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace binaryne {

using NodeId = std::uint32_t;

// Thrown for unreadable files, malformed lines (with line numbers) and
// validation failures during ingestion.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text-line conventions shared by the edge, attribute and label readers.
// delimiter '\0' means any run of spaces/tabs.
struct LineFormat {
  char delimiter = '\0';
  char comment = '#';
};

// Undirected attributed-network skeleton: dense node indices, sorted CSR
// adjacency, interned external ids. Immutable once loaded.
class Graph {
 public:
  Graph() = default;

  std::uint32_t node_count() const { return static_cast<std::uint32_t>(ids_.size()); }
  std::uint64_t edge_count() const { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::uint32_t degree(NodeId v) const {
    return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
  }

  const std::string& external_id(NodeId v) const { return ids_[v]; }
  const std::vector<std::string>& external_ids() const { return ids_; }
  std::optional<NodeId> find(std::string_view external) const;

  // Builds the canonical structure from raw (src, dst) pairs: drops
  // self-loops, deduplicates, symmetrizes, sorts neighbor lists.
  static Graph build(std::vector<std::pair<NodeId, NodeId>> edges,
                     std::vector<std::string> ids,
                     std::uint64_t* dropped_self_loops = nullptr);

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<NodeId> adj_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeId> index_;
  std::uint64_t edge_count_ = 0;
};

// Sparse non-negative node-attribute matrix with row (per node) and column
// (per attribute) views over the same triplet set.
class AttributeMatrix {
 public:
  struct Entry {
    NodeId node;
    std::uint32_t attr;
    double weight;
  };

  AttributeMatrix() = default;

  std::uint32_t attr_count() const { return static_cast<std::uint32_t>(attr_ids_.size()); }
  std::uint64_t nnz() const { return entries_.size(); }
  double total_mass() const { return total_mass_; }
  bool empty() const { return entries_.empty(); }

  // Entries sorted by (node, attr); also the flattening order used when the
  // matrix is turned into a sampling distribution.
  const std::vector<Entry>& entries() const { return entries_; }
  std::span<const Entry> row(NodeId v) const {
    return {entries_.data() + row_offsets_[v], entries_.data() + row_offsets_[v + 1]};
  }
  // Column view: indices into entries(), grouped by attribute.
  std::span<const std::uint32_t> column(std::uint32_t attr) const {
    return {col_index_.data() + col_offsets_[attr], col_index_.data() + col_offsets_[attr + 1]};
  }
  const Entry& entry(std::uint32_t flat) const { return entries_[flat]; }

  std::vector<double> column_sums() const;
  const std::string& attribute_id(std::uint32_t attr) const { return attr_ids_[attr]; }

  static AttributeMatrix build(std::vector<Entry> triplets, std::vector<std::string> attr_ids,
                               std::uint32_t node_count);

 private:
  std::vector<Entry> entries_;
  std::vector<std::uint64_t> row_offsets_;
  std::vector<std::uint64_t> col_offsets_;
  std::vector<std::uint32_t> col_index_;
  std::vector<std::string> attr_ids_;
  double total_mass_ = 0.0;
};

// Partial node -> class-index map; class labels are interned strings.
class LabelMap {
 public:
  LabelMap() = default;

  std::optional<std::uint32_t> label(NodeId v) const {
    if (v >= labels_.size() || labels_[v] < 0) return std::nullopt;
    return static_cast<std::uint32_t>(labels_[v]);
  }
  std::uint32_t class_count() const { return static_cast<std::uint32_t>(class_names_.size()); }
  std::uint32_t labeled_count() const { return labeled_count_; }
  const std::string& class_name(std::uint32_t c) const { return class_names_[c]; }
  std::uint64_t class_size(std::uint32_t c) const { return class_sizes_[c]; }
  // Number of node slots covered by the map (the graph / code row count).
  std::uint32_t node_capacity() const { return static_cast<std::uint32_t>(labels_.size()); }

  static LabelMap build(std::vector<std::int32_t> labels, std::vector<std::string> class_names);

 private:
  std::vector<std::int32_t> labels_;  // -1 = unlabeled
  std::vector<std::string> class_names_;
  std::vector<std::uint64_t> class_sizes_;
  std::uint32_t labeled_count_ = 0;
};

Graph load_edge_list(const std::filesystem::path& path, const LineFormat& fmt = {});
AttributeMatrix load_attributes(const std::filesystem::path& path, const Graph& graph,
                                bool strict = true, const LineFormat& fmt = {});
LabelMap load_labels(const std::filesystem::path& path, const Graph& graph,
                     const LineFormat& fmt = {});
// Same label format, but node ids resolved against a vocabulary list
// (row index = position in `vocab`); used when only a code file is at hand.
LabelMap load_labels(const std::filesystem::path& path, const std::vector<std::string>& vocab,
                     const LineFormat& fmt = {});

void save_edge_list(const Graph& graph, const std::filesystem::path& path);

// Sidecar vocabulary: one external id per line, line number = node index.
void save_vocab(const std::vector<std::string>& ids, const std::filesystem::path& path);
std::vector<std::string> load_vocab(const std::filesystem::path& path);

}  // namespace binaryne
