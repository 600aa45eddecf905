#include <doctest.h>

#include <cmath>

#include "binaryne/codes.hpp"
#include "test_support.hpp"

using namespace binaryne;
using testsupport::TempDir;

namespace {

ModelParams params_with_rows(std::uint32_t nodes, std::uint32_t dim, std::uint64_t seed) {
  ModelParams p(nodes, 0, dim);
  Rng rng(seed);
  for (float& w : p.w_in()) w = static_cast<float>(rng.uniform(-1.0, 1.0));
  return p;
}

}  // namespace

TEST_CASE("binarize: sign thresholding with sgn(0) = +1") {
  ModelParams p(3, 0, 3);
  p.w_in_row(0)[0] = 0.3f;
  p.w_in_row(0)[1] = -0.2f;
  p.w_in_row(0)[2] = 0.0f;
  p.w_in_row(1)[0] = -1.0f;
  p.w_in_row(1)[1] = -0.5f;
  p.w_in_row(1)[2] = -3.0f;
  p.w_in_row(2)[2] = -0.0f;

  CodeMatrix codes = binarize(p);
  CHECK(codes.bit(0, 0));
  CHECK_FALSE(codes.bit(0, 1));
  CHECK(codes.bit(0, 2));           // 0.0 maps to +1
  CHECK(codes.code(1)[0] == 0);     // all-negative row packs to zero words
  CHECK(codes.bit(2, 2));           // -0.0 >= 0 as well
}

TEST_CASE("binarize agrees with the tanh reference at every beta") {
  ModelParams p = params_with_rows(50, 70, 12);
  p.w_in_row(0)[0] = 0.0f;
  p.w_in_row(0)[1] = -0.0f;
  CodeMatrix codes = binarize(p);
  for (double beta : {0.01, 0.1, 1.0, 10.0}) {
    for (NodeId v = 0; v < p.node_count(); ++v) {
      for (std::uint32_t r = 0; r < p.dim(); ++r) {
        const bool reference = std::tanh(beta * static_cast<double>(p.w_in_row(v)[r])) >= 0.0;
        CHECK(codes.bit(v, r) == reference);
      }
    }
  }
}

TEST_CASE("tail bits stay zero") {
  ModelParams p = params_with_rows(20, 70, 3);
  CodeMatrix codes = binarize(p);
  REQUIRE(codes.words_per_code() == 2);
  const std::uint64_t tail_mask = ~((1ull << (70 - 64)) - 1);
  for (NodeId v = 0; v < codes.node_count(); ++v) {
    CHECK((codes.code(v)[1] & tail_mask) == 0);
  }
}

TEST_CASE("code file round trip is byte-stable") {
  TempDir dir;
  CodeMatrix codes = testsupport::random_codes(1000, 128, 77);
  save_codes(codes, dir.file("a.bnec"));
  CodeMatrix loaded = load_codes(dir.file("a.bnec"));
  CHECK(loaded == codes);
  save_codes(loaded, dir.file("b.bnec"));
  CHECK(testsupport::read_file(dir.file("a.bnec")) == testsupport::read_file(dir.file("b.bnec")));
}

TEST_CASE("code file size: 20-byte header plus packed payload") {
  TempDir dir;
  CodeMatrix codes = testsupport::random_codes(2708, 128, 5);
  CHECK(codes.payload_bytes() == 2708u * 128 / 8);
  save_codes(codes, dir.file("c.bnec"));
  CHECK(std::filesystem::file_size(dir.file("c.bnec")) == 20 + codes.payload_bytes());

  // 64x smaller than the same shape stored as 64-bit reals
  CHECK(std::uint64_t(2708) * 128 * 8 == 64 * codes.payload_bytes());

  CodeMatrix empty(0, 128);
  save_codes(empty, dir.file("empty.bnec"));
  CHECK(std::filesystem::file_size(dir.file("empty.bnec")) == 20);
  CHECK(load_codes(dir.file("empty.bnec")) == empty);
}

TEST_CASE("code file errors") {
  TempDir dir;
  testsupport::write_file(dir.file("bad.bnec"), "XXXX garbage");
  CHECK_THROWS(load_codes(dir.file("bad.bnec")));

  CodeMatrix codes = testsupport::random_codes(4, 70, 1);
  save_codes(codes, dir.file("ok.bnec"));
  std::string bytes = testsupport::read_file(dir.file("ok.bnec"));

  testsupport::write_file(dir.file("trunc.bnec"), bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS(load_codes(dir.file("trunc.bnec")));

  testsupport::write_file(dir.file("trail.bnec"), bytes + "zz");
  CHECK_THROWS(load_codes(dir.file("trail.bnec")));

  // flip a tail bit beyond d: the file is no longer canonical
  std::string corrupt = bytes;
  corrupt[corrupt.size() - 1] = static_cast<char>(0x80);
  testsupport::write_file(dir.file("tail.bnec"), corrupt);
  CHECK_THROWS(load_codes(dir.file("tail.bnec")));

  CHECK_THROWS(load_codes(dir.file("missing.bnec")));
}

TEST_CASE("set_bit keeps words canonical") {
  CodeMatrix codes(2, 100);
  codes.set_bit(0, 99, true);
  CHECK(codes.bit(0, 99));
  codes.set_bit(0, 99, false);
  CHECK_FALSE(codes.bit(0, 99));
  for (std::uint64_t w : codes.words()) CHECK(w == 0);
}
