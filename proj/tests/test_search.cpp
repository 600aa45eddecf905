#include <doctest.h>

#include <algorithm>

#include "binaryne/search.hpp"
#include "test_support.hpp"

using namespace binaryne;

namespace {

// Per-bit comparison loop, the oracle the packed kernel must match.
std::uint32_t naive_hamming(const CodeMatrix& codes, NodeId a, NodeId b) {
  std::uint32_t dist = 0;
  for (std::uint32_t r = 0; r < codes.dim(); ++r) {
    if (codes.bit(a, r) != codes.bit(b, r)) ++dist;
  }
  return dist;
}

// Sort-everything-then-truncate with the documented tie rule.
std::vector<RankedResult::Entry> full_sort_oracle(std::uint32_t node_count, std::uint32_t k,
                                                  std::optional<NodeId> skip,
                                                  const std::function<double(NodeId)>& dist) {
  std::vector<RankedResult::Entry> all;
  for (NodeId v = 0; v < node_count; ++v) {
    if (skip && v == *skip) continue;
    all.push_back({v, dist(v)});
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.node < b.node;
  });
  all.resize(k);
  return all;
}

void check_equal(const std::vector<RankedResult::Entry>& got,
                 const std::vector<RankedResult::Entry>& expected) {
  REQUIRE(got.size() == expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].node == expected[i].node);
    CHECK(got[i].distance == expected[i].distance);
  }
}

}  // namespace

TEST_CASE("hamming distance basics") {
  CodeMatrix codes(2, 130);
  CHECK(hamming_distance(codes.code(0), codes.code(1)) == 0);
  for (std::uint32_t r = 0; r < 130; ++r) codes.set_bit(1, r, true);
  CHECK(hamming_distance(codes.code(0), codes.code(1)) == 130);  // full complement
  codes.set_bit(0, 64, true);
  CHECK(hamming_distance(codes.code(0), codes.code(1)) == 129);
}

TEST_CASE("packed hamming equals the per-bit loop at word boundaries") {
  for (std::uint32_t d : {1u, 63u, 64u, 65u, 128u, 200u}) {
    CodeMatrix codes = testsupport::random_codes(50, d, 1000 + d);
    Rng rng(d);
    for (int i = 0; i < 300; ++i) {
      const NodeId a = rng.below(50);
      const NodeId b = rng.below(50);
      CHECK(hamming_distance(codes.code(a), codes.code(b)) == naive_hamming(codes, a, b));
    }
  }
}

TEST_CASE("hamming is a metric") {
  CodeMatrix codes = testsupport::random_codes(60, 96, 9);
  Rng rng(10);
  for (int i = 0; i < 200; ++i) {
    const NodeId a = rng.below(60), b = rng.below(60), c = rng.below(60);
    const auto dab = hamming_distance(codes.code(a), codes.code(b));
    const auto dba = hamming_distance(codes.code(b), codes.code(a));
    const auto dac = hamming_distance(codes.code(a), codes.code(c));
    const auto dbc = hamming_distance(codes.code(b), codes.code(c));
    CHECK(dab == dba);
    CHECK(hamming_distance(codes.code(a), codes.code(a)) == 0);
    if (dab == 0) {
      CHECK(std::equal(codes.code(a).begin(), codes.code(a).end(), codes.code(b).begin()));
    }
    CHECK(dac <= dab + dbc);
  }
}

TEST_CASE("top-k: self queries and crafted neighbors") {
  SUBCASE("own code with self included comes back first at distance zero") {
    CodeMatrix codes = testsupport::random_codes(20, 64, 3);
    RankedResult r = top_k(codes, 0, 1, /*exclude_self=*/false);
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].node == 0);
    CHECK(r.entries[0].distance == 0.0);
  }

  SUBCASE("unique one-bit neighbor ranks first") {
    CodeMatrix codes(10, 64);
    // query = node 0 = all zeros; node 7 differs in 1 bit, the rest in >= 2
    codes.set_bit(7, 3, true);
    for (NodeId v = 1; v < 10; ++v) {
      if (v == 7) continue;
      codes.set_bit(v, 10, true);
      codes.set_bit(v, 20 + v, true);
    }
    RankedResult r = top_k(codes, 0, 3, /*exclude_self=*/true);
    CHECK(r.entries[0].node == 7);
    CHECK(r.entries[0].distance == 1.0);
    CHECK(r.entries[1].distance == 2.0);
  }

  SUBCASE("ties break by ascending node index") {
    CodeMatrix codes(6, 32);  // all codes identical: every distance ties at 0
    RankedResult r = top_k(codes, 3, 5, /*exclude_self=*/true);
    const std::vector<NodeId> expected{0, 1, 2, 4, 5};
    REQUIRE(r.entries.size() == 5);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(r.entries[i].node == expected[i]);
      CHECK(r.entries[i].distance == 0.0);
    }
  }
}

TEST_CASE("top-k equals the full-sort oracle") {
  Rng sizes(77);
  for (int trial = 0; trial < 12; ++trial) {
    const std::uint32_t n = 101 + sizes.below(400);
    const std::uint32_t d = 1 + sizes.below(130);
    CodeMatrix codes = testsupport::random_codes(n, d, 500 + trial);
    const NodeId query = sizes.below(n);
    const bool exclude = trial % 2 == 0;
    for (std::uint32_t k : {1u, 10u, 100u}) {
      RankedResult got = top_k(codes, query, k, exclude);
      auto expected = full_sort_oracle(
          n, k, exclude ? std::optional<NodeId>(query) : std::nullopt, [&](NodeId v) {
            return static_cast<double>(hamming_distance(codes.code(query), codes.code(v)));
          });
      check_equal(got.entries, expected);
    }
  }
}

TEST_CASE("top-k query validation") {
  CodeMatrix codes = testsupport::random_codes(10, 32, 1);
  CHECK_THROWS_AS(top_k(codes, 0, 0, true), std::out_of_range);
  CHECK_THROWS_AS(top_k(codes, 0, 10, true), std::out_of_range);   // self excluded
  CHECK_NOTHROW(top_k(codes, 0, 10, false));
  CHECK_THROWS_AS(top_k(codes, 99, 3, true), std::out_of_range);

  Query q;
  q.code = {0, 0, 0};  // wrong word count for d = 32
  q.k = 1;
  CHECK_THROWS_AS(top_k(codes, q), std::invalid_argument);
}

TEST_CASE("euclidean reference scorer") {
  SUBCASE("stored row is its own nearest neighbor") {
    EmbeddingMatrix m(5, 3);
    Rng rng(2);
    for (NodeId v = 0; v < 5; ++v) {
      for (std::uint32_t r = 0; r < 3; ++r) m.row(v)[r] = rng.uniform(-1.0, 1.0);
    }
    RankedResult r = top_k_euclidean(m, 2, 1, /*exclude_self=*/false);
    CHECK(r.entries[0].node == 2);
    CHECK(r.entries[0].distance == 0.0);
  }

  SUBCASE("two points rank by distance") {
    EmbeddingMatrix m(3, 1);
    m.row(0)[0] = 0.0;
    m.row(1)[0] = 5.0;
    m.row(2)[0] = 1.0;
    RankedResult r = top_k_euclidean(m, 0, 2, /*exclude_self=*/true);
    CHECK(r.entries[0].node == 2);
    CHECK(r.entries[1].node == 1);
    CHECK(r.entries[0].distance == 1.0);   // squared distance
    CHECK(r.entries[1].distance == 25.0);
  }

  SUBCASE("matches the full-sort oracle") {
    EmbeddingMatrix m(300, 16);
    Rng rng(8);
    for (NodeId v = 0; v < 300; ++v) {
      for (std::uint32_t r = 0; r < 16; ++r) m.row(v)[r] = rng.uniform(-1.0, 1.0);
    }
    for (std::uint32_t k : {1u, 10u, 100u}) {
      RankedResult got = top_k_euclidean(m, 17, k, true);
      auto q = m.row(17);
      auto expected = full_sort_oracle(300, k, NodeId{17}, [&](NodeId v) {
        double acc = 0.0;
        for (std::uint32_t r = 0; r < 16; ++r) {
          const double diff = q[r] - m.row(v)[r];
          acc += diff * diff;
        }
        return acc;
      });
      check_equal(got.entries, expected);
    }
  }
}

TEST_CASE("elapsed time is recorded") {
  CodeMatrix codes = testsupport::random_codes(5000, 128, 4);
  RankedResult r = top_k(codes, 0, 100, true);
  CHECK(r.elapsed.count() > 0);
}
