#include "binaryne/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace binaryne {

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("alias table needs at least one category");
  long double sum = 0.0L;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("alias table weights must be finite and non-negative");
    }
    sum += w;
  }
  if (sum <= 0.0L) throw std::invalid_argument("alias table needs a positive total weight");

  // Scaled residuals kept in extended precision while buckets trade mass;
  // only the final acceptance probabilities are rounded to double.
  std::vector<long double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = static_cast<long double>(weights[i]) * static_cast<long double>(n) / sum;
  }

  prob_.assign(n, 1.0);
  alias_.resize(n);
  for (std::size_t i = 0; i < n; ++i) alias_[i] = static_cast<std::uint32_t>(i);

  std::vector<std::uint32_t> small, large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    (scaled[i] < 1.0L ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    const std::uint32_t l = large.back();
    small.pop_back();
    prob_[s] = static_cast<double>(scaled[s]);
    alias_[s] = l;
    scaled[l] -= (1.0L - scaled[s]);
    if (scaled[l] < 1.0L) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers carry residue ~1 up to rounding; they keep their own mass.
  for (std::uint32_t l : large) prob_[l] = 1.0;
  for (std::uint32_t s : small) prob_[s] = 1.0;
}

std::vector<double> AliasTable::reconstructed() const {
  const std::size_t n = prob_.size();
  std::vector<long double> mass(n, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    mass[i] += static_cast<long double>(prob_[i]);
    if (alias_[i] != i) mass[alias_[i]] += 1.0L - static_cast<long double>(prob_[i]);
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<double>(mass[i] / static_cast<long double>(n));
  }
  return out;
}

PairSampler::PairSampler(const PairCounts& counts)
    : counts_(&counts), table_([&] {
        if (counts.empty()) throw std::invalid_argument("empty pair counts");
        std::vector<double> weights;
        weights.reserve(counts.distinct_ordered());
        for (const auto& p : counts.ordered()) weights.push_back(static_cast<double>(p.count));
        return AliasTable(weights);
      }()) {}

AttributeSampler::AttributeSampler(const AttributeMatrix& attrs)
    : attrs_(&attrs), table_([&] {
        if (attrs.nnz() == 0) throw std::invalid_argument("empty attribute matrix");
        std::vector<double> weights;
        weights.reserve(attrs.nnz());
        for (const auto& e : attrs.entries()) weights.push_back(e.weight);
        return AliasTable(weights);
      }()) {}

namespace {

std::vector<double> apply_power(std::span<const double> base, double power) {
  std::vector<double> weights(base.size(), 0.0);
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i] < 0.0) throw std::invalid_argument("negative base frequency");
    if (base[i] > 0.0) weights[i] = std::pow(base[i], power);
  }
  return weights;
}

}  // namespace

NoiseDistribution::NoiseDistribution(std::span<const double> base_frequencies, double power)
    : table_(apply_power(base_frequencies, power)), power_(power) {
  for (std::size_t i = 0; i < base_frequencies.size(); ++i) {
    if (base_frequencies[i] > 0.0) {
      ++support_;
      sole_category_ = static_cast<std::uint32_t>(i);
    }
  }
}

NoiseDistribution NoiseDistribution::for_nodes(const PairCounts& counts,
                                               std::uint32_t node_count, double power) {
  std::vector<std::uint64_t> freq = counts.center_frequencies(node_count);
  std::vector<double> base(freq.begin(), freq.end());
  return NoiseDistribution(base, power);
}

NoiseDistribution NoiseDistribution::for_attributes(const AttributeMatrix& attrs, double power) {
  return NoiseDistribution(attrs.column_sums(), power);
}

void NoiseDistribution::draw_negatives(std::uint32_t k, std::uint32_t exclude, Rng& rng,
                                       std::vector<std::uint32_t>& out) const {
  if (k < 1) throw std::invalid_argument("need at least one negative");
  if (support_ == 1 && sole_category_ == exclude) {
    throw std::invalid_argument("noise distribution has only the excluded category");
  }
  out.clear();
  out.reserve(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    std::uint32_t draw;
    do {
      draw = table_.sample(rng);
    } while (draw == exclude);
    out.push_back(draw);
  }
}

std::vector<std::uint32_t> draw_negatives(const NoiseDistribution& noise, std::uint32_t k,
                                          std::uint32_t exclude, Rng& rng) {
  std::vector<std::uint32_t> out;
  noise.draw_negatives(k, exclude, rng, out);
  return out;
}

}  // namespace binaryne
