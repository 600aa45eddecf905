#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "binaryne/model.hpp"

namespace binaryne {

// Bit-packed d-bit binary codes, one row per node. Bit r of node i lives at
// word r / 64, bit r % 64; bit 1 encodes +1, bit 0 encodes -1. Bits at and
// beyond d in the last word are always zero, so whole-word comparisons are
// valid.
class CodeMatrix {
 public:
  CodeMatrix() = default;
  CodeMatrix(std::uint32_t node_count, std::uint32_t dim);

  std::uint32_t node_count() const { return node_count_; }
  std::uint32_t dim() const { return dim_; }
  std::uint32_t words_per_code() const { return words_; }
  std::uint64_t payload_bytes() const {
    return std::uint64_t(node_count_) * words_ * sizeof(std::uint64_t);
  }

  std::span<const std::uint64_t> code(NodeId v) const {
    return {data_.data() + std::size_t(v) * words_, words_};
  }
  std::span<std::uint64_t> code(NodeId v) {
    return {data_.data() + std::size_t(v) * words_, words_};
  }

  bool bit(NodeId v, std::uint32_t r) const {
    return (code(v)[r >> 6] >> (r & 63)) & 1u;
  }
  void set_bit(NodeId v, std::uint32_t r, bool value) {
    std::uint64_t& word = code(v)[r >> 6];
    const std::uint64_t mask = 1ull << (r & 63);
    word = value ? (word | mask) : (word & ~mask);
  }

  std::span<const std::uint64_t> words() const { return data_; }

  bool operator==(const CodeMatrix& other) const = default;

 private:
  std::uint32_t node_count_ = 0;
  std::uint32_t dim_ = 0;
  std::uint32_t words_ = 0;
  std::vector<std::uint64_t> data_;
};

// Sign binarization of the trained input matrix: bit r of node i is set iff
// W_in[i][r] >= 0. tanh(beta x) is odd and increasing, so the result is the
// same for every beta > 0; zero maps to +1.
CodeMatrix binarize(const ModelParams& params);

// Code file: magic "BNEC", version u32, node_count u64, d u32, all
// little-endian (20-byte header), then packed words row-major.
void save_codes(const CodeMatrix& codes, const std::filesystem::path& path);
CodeMatrix load_codes(const std::filesystem::path& path);

}  // namespace binaryne
