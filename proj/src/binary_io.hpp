#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

// Little-endian primitives shared by the checkpoint and code-file formats.
namespace binaryne::io {

class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
T byteswap_integral(T v) {
  auto bytes = std::bit_cast<std::array<std::byte, sizeof(T)>>(v);
  std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

template <typename T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return byteswap_integral(v);
  }
}

template <typename T>
T from_le(T v) {
  return to_le(v);
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
  v = to_le(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
  v = to_le(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

inline void write_f32(std::ostream& out, float v) {
  std::uint32_t bits = to_le(std::bit_cast<std::uint32_t>(v));
  out.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
}

inline std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return from_le(v);
}

inline std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return from_le(v);
}

inline float read_f32(std::istream& in) {
  std::uint32_t bits = 0;
  in.read(reinterpret_cast<char*>(&bits), sizeof(bits));
  return std::bit_cast<float>(from_le(bits));
}

// Bulk f32 transfers; byte-identical to per-element writes, fast on
// little-endian hosts.
inline void write_f32_block(std::ostream& out, const float* data, std::size_t count) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 4));
  } else {
    for (std::size_t i = 0; i < count; ++i) write_f32(out, data[i]);
  }
}

inline void read_f32_block(std::istream& in, float* data, std::size_t count) {
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * 4));
  } else {
    for (std::size_t i = 0; i < count; ++i) data[i] = read_f32(in);
  }
}

inline void write_u64_block(std::ostream& out, const std::uint64_t* data, std::size_t count) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 8));
  } else {
    for (std::size_t i = 0; i < count; ++i) write_u64(out, data[i]);
  }
}

inline void read_u64_block(std::istream& in, std::uint64_t* data, std::size_t count) {
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * 8));
  } else {
    for (std::size_t i = 0; i < count; ++i) data[i] = read_u64(in);
  }
}

}  // namespace binaryne::io
