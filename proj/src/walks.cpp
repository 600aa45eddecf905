#include "binaryne/walks.hpp"

#include <algorithm>
#include <fstream>
#include <thread>
#include <tuple>

#include "binaryne/rng.hpp"

namespace binaryne {

namespace {

// Open-addressing counter keyed by packed canonical pairs (lo << 32 | hi,
// lo < hi). Key 0 never occurs, so it marks empty slots.
class PairCountMap {
 public:
  PairCountMap() { rehash(1 << 10); }

  void add(std::uint64_t key, std::uint64_t delta) {
    if ((size_ + 1) * 10 >= capacity_ * 7) rehash(capacity_ * 2);
    std::size_t slot = probe(key);
    if (keys_[slot] == 0) {
      keys_[slot] = key;
      vals_[slot] = delta;
      ++size_;
    } else {
      vals_[slot] += delta;
    }
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < capacity_; ++i) {
      if (keys_[i] != 0) fn(keys_[i], vals_[i]);
    }
  }

  std::size_t size() const { return size_; }

  void merge_from(const PairCountMap& other) {
    other.for_each([&](std::uint64_t k, std::uint64_t v) { add(k, v); });
  }

 private:
  std::size_t probe(std::uint64_t key) const {
    std::size_t slot = mix(key) & mask_;
    while (keys_[slot] != 0 && keys_[slot] != key) slot = (slot + 1) & mask_;
    return slot;
  }

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return x;
  }

  void rehash(std::size_t new_capacity) {
    std::vector<std::uint64_t> old_keys = std::move(keys_);
    std::vector<std::uint64_t> old_vals = std::move(vals_);
    keys_.assign(new_capacity, 0);
    vals_.assign(new_capacity, 0);
    capacity_ = new_capacity;
    mask_ = new_capacity - 1;
    for (std::size_t i = 0; i < old_keys.size(); ++i) {
      if (old_keys[i] == 0) continue;
      std::size_t slot = probe(old_keys[i]);
      keys_[slot] = old_keys[i];
      vals_[slot] = old_vals[i];
    }
  }

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint64_t> vals_;
  std::size_t capacity_ = 0;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

constexpr std::uint64_t pack_canonical(NodeId a, NodeId b) {
  NodeId lo = std::min(a, b);
  NodeId hi = std::max(a, b);
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

}  // namespace

std::uint64_t PairCounts::count(NodeId center, NodeId context) const {
  OrderedPair probe{center, context, 0};
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), probe,
                             [](const OrderedPair& a, const OrderedPair& b) {
                               return std::tie(a.center, a.context) <
                                      std::tie(b.center, b.context);
                             });
  if (it == pairs_.end() || it->center != center || it->context != context) return 0;
  return it->count;
}

std::vector<std::uint64_t> PairCounts::center_frequencies(std::uint32_t node_count) const {
  std::vector<std::uint64_t> freq(node_count, 0);
  for (const OrderedPair& p : pairs_) freq[p.center] += p.count;
  return freq;
}

PairCounts PairCounts::from_entries(std::vector<OrderedPair> entries) {
  for (const OrderedPair& p : entries) {
    if (p.center == p.context) throw std::invalid_argument("diagonal pair count");
    if (p.count == 0) throw std::invalid_argument("zero pair count");
  }
  std::sort(entries.begin(), entries.end(), [](const OrderedPair& a, const OrderedPair& b) {
    return std::tie(a.center, a.context) < std::tie(b.center, b.context);
  });
  PairCounts out;
  for (const OrderedPair& p : entries) {
    if (!out.pairs_.empty() && out.pairs_.back().center == p.center &&
        out.pairs_.back().context == p.context) {
      out.pairs_.back().count += p.count;
    } else {
      out.pairs_.push_back(p);
    }
    out.total_ += p.count;
  }
  return out;
}

WalkSet generate_walks(const Graph& graph, const WalkConfig& cfg) {
  cfg.validate();
  const std::uint64_t n = graph.node_count();
  const std::uint64_t total_walks = n * cfg.walks_per_node;

  std::vector<std::uint32_t> lengths(total_walks, 0);
  // Each walk has an independent RNG stream keyed by (seed, node, repeat),
  // so the result is the same for any thread count.
  auto run_range = [&](std::uint64_t begin, std::uint64_t end, std::vector<NodeId>& out) {
    out.clear();
    for (std::uint64_t w = begin; w < end; ++w) {
      const NodeId start = static_cast<NodeId>(w / cfg.walks_per_node);
      const std::uint64_t repeat = w % cfg.walks_per_node;
      Rng rng = Rng::stream(cfg.seed, start, repeat);
      NodeId cur = start;
      out.push_back(cur);
      std::uint32_t len = 1;
      while (len < cfg.walk_length) {
        const std::uint32_t deg = graph.degree(cur);
        if (deg == 0) break;
        cur = graph.neighbors(cur)[rng.below(deg)];
        out.push_back(cur);
        ++len;
      }
      lengths[w] = len;
    }
  };

  const std::uint32_t threads = std::min<std::uint64_t>(cfg.threads, std::max<std::uint64_t>(total_walks, 1));
  std::vector<std::vector<NodeId>> chunks(threads);
  if (threads <= 1) {
    run_range(0, total_walks, chunks[0]);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t per = (total_walks + threads - 1) / threads;
    for (std::uint32_t t = 0; t < threads; ++t) {
      const std::uint64_t begin = std::min<std::uint64_t>(t * per, total_walks);
      const std::uint64_t end = std::min<std::uint64_t>(begin + per, total_walks);
      pool.emplace_back([&, begin, end, t] { run_range(begin, end, chunks[t]); });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<std::uint64_t> offsets(total_walks + 1, 0);
  for (std::uint64_t w = 0; w < total_walks; ++w) offsets[w + 1] = offsets[w] + lengths[w];
  std::vector<NodeId> nodes;
  nodes.reserve(offsets[total_walks]);
  for (const auto& chunk : chunks) nodes.insert(nodes.end(), chunk.begin(), chunk.end());
  return WalkSet::from_parts(std::move(offsets), std::move(nodes));
}

PairCounts count_context_pairs(const WalkSet& walks, std::uint32_t window,
                               std::uint32_t threads) {
  if (walks.size() == 0) throw std::invalid_argument("empty walk set");
  if (window < 1) throw std::invalid_argument("window must be >= 1");

  // Windows are symmetric, so each unordered co-occurrence is counted once
  // canonically and emitted in both directions afterwards.
  auto count_range = [&](std::size_t begin, std::size_t end, PairCountMap& map) {
    for (std::size_t w = begin; w < end; ++w) {
      std::span<const NodeId> walk = walks.walk(w);
      const std::size_t len = walk.size();
      for (std::size_t i = 0; i + 1 < len; ++i) {
        const std::size_t hi = std::min(len - 1, i + window);
        for (std::size_t j = i + 1; j <= hi; ++j) {
          if (walk[i] == walk[j]) continue;
          map.add(pack_canonical(walk[i], walk[j]), 1);
        }
      }
    }
  };

  const std::uint32_t workers =
      static_cast<std::uint32_t>(std::min<std::size_t>(std::max(threads, 1u), walks.size()));
  std::vector<PairCountMap> maps(workers);
  if (workers <= 1) {
    count_range(0, walks.size(), maps[0]);
  } else {
    std::vector<std::thread> pool;
    const std::size_t per = (walks.size() + workers - 1) / workers;
    for (std::uint32_t t = 0; t < workers; ++t) {
      const std::size_t begin = std::min(static_cast<std::size_t>(t) * per, walks.size());
      const std::size_t end = std::min(begin + per, walks.size());
      pool.emplace_back([&, begin, end, t] { count_range(begin, end, maps[t]); });
    }
    for (auto& th : pool) th.join();
    for (std::uint32_t t = 1; t < workers; ++t) maps[0].merge_from(maps[t]);
  }

  std::vector<PairCounts::OrderedPair> entries;
  entries.reserve(maps[0].size() * 2);
  maps[0].for_each([&](std::uint64_t key, std::uint64_t count) {
    const NodeId lo = static_cast<NodeId>(key >> 32);
    const NodeId hi = static_cast<NodeId>(key & 0xffffffffu);
    entries.push_back({lo, hi, count});
    entries.push_back({hi, lo, count});
  });
  return PairCounts::from_entries(std::move(entries));
}

void save_pair_counts(const PairCounts& counts, const std::vector<std::string>& ids,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  for (const auto& p : counts.ordered()) {
    out << ids[p.center] << ' ' << ids[p.context] << ' ' << p.count << '\n';
  }
  if (!out) throw ParseError("i/o error while writing " + path.string());
}

void save_walks(const WalkSet& walks, const std::vector<std::string>& ids,
                const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  for (std::size_t w = 0; w < walks.size(); ++w) {
    std::span<const NodeId> walk = walks.walk(w);
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) out << ' ';
      out << ids[walk[i]];
    }
    out << '\n';
  }
  if (!out) throw ParseError("i/o error while writing " + path.string());
}

}  // namespace binaryne
