#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "binaryne/graph.hpp"
#include "binaryne/rng.hpp"
#include "binaryne/walks.hpp"

namespace binaryne {

// Walker/Vose alias table: O(n) construction, O(1) draws.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights);

  std::uint32_t size() const { return static_cast<std::uint32_t>(prob_.size()); }

  std::uint32_t sample(Rng& rng) const {
    const std::uint32_t k = rng.below(size());
    return rng.uniform() < prob_[k] ? k : alias_[k];
  }

  // Probability mass the table routes to each category; test hook for the
  // reconstruction identity against weight_k / sum(weights).
  std::vector<double> reconstructed() const;

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

// Draws (center, context) pairs proportionally to n(v_i, v_j). The flattened
// category order is PairCounts::ordered(), i.e. sorted by (center, context).
class PairSampler {
 public:
  explicit PairSampler(const PairCounts& counts);
  std::pair<NodeId, NodeId> sample(Rng& rng) const {
    const auto& p = counts_->ordered()[table_.sample(rng)];
    return {p.center, p.context};
  }

 private:
  const PairCounts* counts_;
  AliasTable table_;
};

// Draws (node, attribute) pairs proportionally to X_ij.
class AttributeSampler {
 public:
  explicit AttributeSampler(const AttributeMatrix& attrs);
  std::pair<NodeId, std::uint32_t> sample(Rng& rng) const {
    const auto& e = attrs_->entry(table_.sample(rng));
    return {e.node, e.attr};
  }

 private:
  const AttributeMatrix* attrs_;
  AliasTable table_;
};

// Noise distribution for negative sampling: base frequencies raised to
// `power` (0.75 by default, the usual unigram damping), zero-frequency
// categories stay unsampleable.
class NoiseDistribution {
 public:
  NoiseDistribution(std::span<const double> base_frequencies, double power = 0.75);

  static NoiseDistribution for_nodes(const PairCounts& counts, std::uint32_t node_count,
                                     double power = 0.75);
  static NoiseDistribution for_attributes(const AttributeMatrix& attrs, double power = 0.75);

  std::uint32_t sample(Rng& rng) const { return table_.sample(rng); }
  std::uint32_t support() const { return support_; }
  double power() const { return power_; }

  // K independent draws, resampling any draw equal to `exclude`; duplicates
  // among the K results are allowed.
  void draw_negatives(std::uint32_t k, std::uint32_t exclude, Rng& rng,
                      std::vector<std::uint32_t>& out) const;

 private:
  AliasTable table_;
  double power_;
  std::uint32_t support_ = 0;       // categories with positive mass
  std::uint32_t sole_category_ = 0; // defined when support_ == 1
};

std::vector<std::uint32_t> draw_negatives(const NoiseDistribution& noise, std::uint32_t k,
                                          std::uint32_t exclude, Rng& rng);

}  // namespace binaryne
