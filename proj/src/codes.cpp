#include "binaryne/codes.hpp"

#include <cstring>

#include "binary_io.hpp"

namespace binaryne {

CodeMatrix::CodeMatrix(std::uint32_t node_count, std::uint32_t dim)
    : node_count_(node_count), dim_(dim), words_((dim + 63) / 64) {
  if (dim == 0) throw std::invalid_argument("code dimension must be >= 1");
  data_.assign(std::size_t(node_count) * words_, 0);
}

CodeMatrix binarize(const ModelParams& params) {
  CodeMatrix codes(params.node_count(), params.dim());
  for (NodeId v = 0; v < params.node_count(); ++v) {
    std::span<const float> row = params.w_in_row(v);
    std::span<std::uint64_t> packed = codes.code(v);
    for (std::uint32_t r = 0; r < params.dim(); ++r) {
      if (row[r] >= 0.0f) packed[r >> 6] |= 1ull << (r & 63);
    }
  }
  return codes;
}

namespace {
constexpr char kCodesMagic[4] = {'B', 'N', 'E', 'C'};
constexpr std::uint32_t kCodesVersion = 1;
}  // namespace

void save_codes(const CodeMatrix& codes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io::FileError("cannot write " + path.string());
  out.write(kCodesMagic, 4);
  io::write_u32(out, kCodesVersion);
  io::write_u64(out, codes.node_count());
  io::write_u32(out, codes.dim());
  io::write_u64_block(out, codes.words().data(), codes.words().size());
  if (!out) throw io::FileError("i/o error while writing " + path.string());
}

CodeMatrix load_codes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::FileError("cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCodesMagic, 4) != 0) {
    throw io::FileError("bad code-file magic in " + path.string());
  }
  const std::uint32_t version = io::read_u32(in);
  if (version != kCodesVersion) {
    throw io::FileError("unsupported code-file version " + std::to_string(version));
  }
  const std::uint64_t n = io::read_u64(in);
  const std::uint32_t d = io::read_u32(in);
  if (!in || n > 0xffffffffull || d == 0) {
    throw io::FileError("invalid code-file header in " + path.string());
  }
  CodeMatrix codes(static_cast<std::uint32_t>(n), d);
  if (codes.node_count() > 0) {
    io::read_u64_block(in, codes.code(0).data(),
                       std::size_t(codes.node_count()) * codes.words_per_code());
    if (!in) throw io::FileError("truncated code file " + path.string());
  }
  in.peek();
  if (!in.eof()) throw io::FileError("trailing data in code file " + path.string());
  // Tail bits must be zero on disk as well; reject non-canonical files.
  const std::uint32_t tail_bits = d & 63;
  if (tail_bits != 0) {
    const std::uint64_t tail_mask = ~((1ull << tail_bits) - 1);
    for (NodeId v = 0; v < codes.node_count(); ++v) {
      if (codes.code(v).back() & tail_mask) {
        throw io::FileError("non-canonical tail bits in " + path.string());
      }
    }
  }
  return codes;
}

}  // namespace binaryne
