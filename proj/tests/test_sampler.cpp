#include <doctest.h>

#include <chrono>
#include <cmath>
#include <map>

#include "binaryne/sampler.hpp"
#include "test_support.hpp"

using namespace binaryne;

namespace {

std::vector<double> empirical(const AliasTable& table, std::size_t draws, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint64_t> hits(table.size(), 0);
  for (std::size_t i = 0; i < draws; ++i) ++hits[table.sample(rng)];
  std::vector<double> freq(table.size());
  for (std::size_t k = 0; k < hits.size(); ++k) {
    freq[k] = static_cast<double>(hits[k]) / static_cast<double>(draws);
  }
  return freq;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
  return 0.5 * l1;
}

std::vector<double> normalized(std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  std::vector<double> p(weights.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = weights[i] / sum;
  return p;
}

}  // namespace

TEST_CASE("alias table: reconstruction identities") {
  SUBCASE("uniform") {
    AliasTable t(std::vector<double>{1, 1, 1, 1});
    for (double mass : t.reconstructed()) CHECK(mass == doctest::Approx(0.25).epsilon(1e-14));
  }
  SUBCASE("two categories 3:1") {
    AliasTable t(std::vector<double>{3, 1});
    auto mass = t.reconstructed();
    CHECK(mass[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(mass[1] == doctest::Approx(0.25).epsilon(1e-14));
  }
  SUBCASE("random weights up to 1e5 categories") {
    for (std::uint32_t n : {1u, 2u, 17u, 1000u, 100000u}) {
      Rng rng(n);
      std::vector<double> weights(n);
      for (double& w : weights) w = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.01, 10.0);
      weights[0] = 1.0;  // keep at least one positive
      AliasTable t(weights);
      auto target = normalized(weights);
      auto mass = t.reconstructed();
      for (std::size_t k = 0; k < n; ++k) {
        if (weights[k] == 0.0) {
          CHECK(mass[k] == 0.0);
        } else {
          CHECK(std::abs(mass[k] - target[k]) / target[k] < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("alias table: empirical frequencies") {
  std::vector<double> weights{5, 1, 2, 2};
  AliasTable t(weights);
  auto freq = empirical(t, 1'000'000, 99);
  auto target = normalized(weights);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    CHECK(std::abs(freq[k] - target[k]) < 0.005);
  }
}

TEST_CASE("alias table: construction errors and zero weights") {
  CHECK_THROWS_AS(AliasTable(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(AliasTable(std::vector<double>{0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(AliasTable(std::vector<double>{1, -2}), std::invalid_argument);

  AliasTable t(std::vector<double>{0, 5, 0, 5});
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const std::uint32_t k = t.sample(rng);
    CHECK((k == 1 || k == 3));
  }
}

TEST_CASE("pair sampler") {
  SUBCASE("single pair") {
    PairCounts counts = PairCounts::from_entries({{0, 1, 1}});
    PairSampler sampler(counts);
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
      auto [a, b] = sampler.sample(rng);
      CHECK(a == 0);
      CHECK(b == 1);
    }
  }
  SUBCASE("asymmetric 3:1") {
    PairCounts counts = PairCounts::from_entries({{0, 1, 3}, {1, 0, 1}});
    PairSampler sampler(counts);
    Rng rng(5);
    std::size_t first = 0;
    const std::size_t draws = 100000;
    for (std::size_t i = 0; i < draws; ++i) {
      if (sampler.sample(rng).first == 0) ++first;
    }
    CHECK(std::abs(static_cast<double>(first) / draws - 0.75) < 0.01);
  }
  SUBCASE("walk-harvested counts: center marginal matches frequencies") {
    Graph g = testsupport::random_graph(8, 14, 3);
    WalkConfig cfg;
    cfg.walk_length = 12;
    cfg.walks_per_node = 6;
    cfg.window = 3;
    cfg.seed = 2;
    PairCounts counts = count_context_pairs(generate_walks(g, cfg), cfg.window);
    REQUIRE(!counts.empty());
    PairSampler sampler(counts);

    std::vector<std::uint64_t> freq = counts.center_frequencies(g.node_count());
    Rng rng(41);
    const std::size_t draws = 200000;
    std::vector<std::uint64_t> observed(g.node_count(), 0);
    for (std::size_t i = 0; i < draws; ++i) ++observed[sampler.sample(rng).first];

    double stat = 0.0;
    std::uint32_t df = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (freq[v] == 0) {
        CHECK(observed[v] == 0);
        continue;
      }
      const double expected = static_cast<double>(draws) * static_cast<double>(freq[v]) /
                              static_cast<double>(counts.total());
      const double diff = static_cast<double>(observed[v]) - expected;
      stat += diff * diff / expected;
      ++df;
    }
    REQUIRE(df >= 2);
    CHECK(stat < testsupport::chi2_quantile(df - 1, testsupport::kZ999));
  }
  SUBCASE("empty counts rejected") {
    PairCounts counts;
    CHECK_THROWS_AS(PairSampler{counts}, std::invalid_argument);
  }
}

TEST_CASE("attribute sampler") {
  auto matrix = [](std::vector<AttributeMatrix::Entry> entries, std::uint32_t attrs,
                   std::uint32_t nodes) {
    std::vector<std::string> ids(attrs);
    for (std::uint32_t a = 0; a < attrs; ++a) ids[a] = "w" + std::to_string(a);
    return AttributeMatrix::build(std::move(entries), std::move(ids), nodes);
  };

  SUBCASE("single entry") {
    AttributeMatrix x = matrix({{0, 0, 1.0}}, 1, 1);
    AttributeSampler sampler(x);
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
      auto [node, attr] = sampler.sample(rng);
      CHECK(node == 0);
      CHECK(attr == 0);
    }
  }
  SUBCASE("two equal entries") {
    AttributeMatrix x = matrix({{0, 0, 2.0}, {1, 1, 2.0}}, 2, 2);
    AttributeSampler sampler(x);
    Rng rng(11);
    std::size_t first = 0;
    const std::size_t draws = 100000;
    for (std::size_t i = 0; i < draws; ++i) {
      if (sampler.sample(rng).first == 0) ++first;
    }
    CHECK(std::abs(static_cast<double>(first) / draws - 0.5) < 0.01);
  }
  SUBCASE("dominant entry") {
    AttributeMatrix x = matrix({{0, 0, 98.0}, {1, 1, 1.0}, {2, 2, 1.0}}, 3, 3);
    AttributeSampler sampler(x);
    Rng rng(13);
    std::size_t dominant = 0;
    const std::size_t draws = 100000;
    for (std::size_t i = 0; i < draws; ++i) {
      if (sampler.sample(rng).first == 0) ++dominant;
    }
    CHECK(std::abs(static_cast<double>(dominant) / draws - 0.98) < 0.005);
  }
  SUBCASE("empty matrix rejected") {
    AttributeMatrix x;
    CHECK_THROWS_AS(AttributeSampler{x}, std::invalid_argument);
  }
}

TEST_CASE("noise distribution and negative draws") {
  SUBCASE("exclusion contract") {
    std::vector<double> base(1000, 1.0);
    NoiseDistribution noise(base, 0.75);
    Rng rng(17);
    for (std::uint32_t trial = 0; trial < 200; ++trial) {
      auto negs = draw_negatives(noise, 5, 42, rng);
      CHECK(negs.size() == 5);
      for (std::uint32_t n : negs) CHECK(n != 42);
    }
  }
  SUBCASE("two categories excluding one") {
    std::vector<double> base{1.0, 1.0};
    NoiseDistribution noise(base, 1.0);
    Rng rng(19);
    for (int i = 0; i < 100; ++i) {
      auto negs = draw_negatives(noise, 1, 0, rng);
      CHECK(negs[0] == 1);
    }
  }
  SUBCASE("uniform frequencies after exclusion") {
    const std::uint32_t n = 20;
    std::vector<double> base(n, 1.0);
    NoiseDistribution noise(base, 1.0);
    Rng rng(23);
    std::vector<std::uint64_t> hits(n, 0);
    const std::size_t draws = 1'000'000;
    for (std::size_t i = 0; i < draws; ++i) ++hits[draw_negatives(noise, 1, 0, rng)[0]];
    CHECK(hits[0] == 0);
    for (std::uint32_t k = 1; k < n; ++k) {
      const double freq = static_cast<double>(hits[k]) / draws;
      CHECK(std::abs(freq - 1.0 / (n - 1)) < 0.005);
    }
  }
  SUBCASE("sole excluded category is an error") {
    std::vector<double> base{0.0, 3.0, 0.0};
    NoiseDistribution noise(base, 0.75);
    Rng rng(29);
    CHECK_THROWS_AS(draw_negatives(noise, 1, 1, rng), std::invalid_argument);
    CHECK(draw_negatives(noise, 1, 0, rng)[0] == 1);
  }
  SUBCASE("power shapes the distribution") {
    std::vector<double> base{16.0, 1.0};
    NoiseDistribution damped(base, 0.75);  // 8 : 1
    NoiseDistribution flat(base, 0.0);     // 1 : 1
    Rng rng(31);
    const std::size_t draws = 200000;
    std::size_t damped_first = 0, flat_first = 0;
    for (std::size_t i = 0; i < draws; ++i) {
      if (damped.sample(rng) == 0) ++damped_first;
      if (flat.sample(rng) == 0) ++flat_first;
    }
    CHECK(std::abs(static_cast<double>(damped_first) / draws - 8.0 / 9.0) < 0.01);
    CHECK(std::abs(static_cast<double>(flat_first) / draws - 0.5) < 0.01);
  }
  SUBCASE("node noise from pair counts") {
    PairCounts counts = PairCounts::from_entries({{0, 1, 4}, {1, 0, 4}, {1, 2, 4}, {2, 1, 4}});
    NoiseDistribution noise = NoiseDistribution::for_nodes(counts, 4, 1.0);
    CHECK(noise.support() == 3);  // node 3 never appears
    Rng rng(37);
    for (int i = 0; i < 1000; ++i) CHECK(noise.sample(rng) != 3);
  }
}

TEST_CASE("alias draws are O(1) across table sizes") {
  // Per-draw cost must not scale with the category count. Cache effects make
  // large tables somewhat slower, so the gate is a generous constant far
  // below the 10^4 factor a linear scan would show.
  auto mean_draw_ns = [](std::uint32_t n) {
    Rng wrng(n);
    std::vector<double> weights(n);
    for (double& w : weights) w = wrng.uniform(0.1, 1.0);
    AliasTable table(weights);
    Rng rng(1234);
    volatile std::uint64_t sink = 0;
    const std::size_t warmup = 100000;
    for (std::size_t i = 0; i < warmup; ++i) sink += table.sample(rng);
    const std::size_t draws = 2'000'000;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < draws; ++i) sink += table.sample(rng);
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::nano>(stop - start).count() /
           static_cast<double>(draws);
  };

  const double t_small = mean_draw_ns(100);
  const double t_medium = mean_draw_ns(10000);
  const double t_large = mean_draw_ns(1'000'000);
  CAPTURE(t_small);
  CAPTURE(t_medium);
  CAPTURE(t_large);
  CHECK(t_medium < 25.0 * t_small);
  CHECK(t_large < 25.0 * t_small);
}
