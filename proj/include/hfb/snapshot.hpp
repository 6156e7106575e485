#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "hfb/state.hpp"

namespace hfb {

// Binary snapshot layout, all fields little-endian:
//   "HFB1"                      4 bytes
//   d                           uint64
//   n                           uint64
//   L                           float64
//   phi[N]                      (re, im) float64 pairs
//   gamma[N*N], sigma[N*N]      row-major, (re, im) float64 pairs

inline constexpr std::array<char, 4> kSnapshotMagic{'H', 'F', 'B', '1'};

namespace detail {

inline void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>((v >> (8 * b)) & 0xffu));
}

inline void put_f64(std::vector<unsigned char>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class ByteReader {
 public:
  explicit ByteReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  std::uint64_t u64() {
    if (pos_ + 8 > bytes_.size()) throw InvalidArgument("snapshot: truncated file");
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes_[pos_ + b]) << (8 * b);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  Complex c128() {
    const double re = f64();
    return {re, f64()};
  }
  void expect_magic() {
    if (bytes_.size() < 4 || std::memcmp(bytes_.data(), kSnapshotMagic.data(), 4) != 0)
      throw InvalidArgument("snapshot: bad magic, expected HFB1");
    pos_ = 4;
  }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<unsigned char> encode_snapshot(const HfbState& s) {
  check_shapes(s, "encode_snapshot");
  const Eigen::Index n = s.size();
  std::vector<unsigned char> out(kSnapshotMagic.begin(), kSnapshotMagic.end());
  out.reserve(4 + 24 + static_cast<std::size_t>(16 * (n + 2 * n * n)));
  detail::put_u64(out, static_cast<std::uint64_t>(s.grid.dimension()));
  detail::put_u64(out, static_cast<std::uint64_t>(s.grid.points_per_axis()));
  detail::put_f64(out, s.grid.side_length());
  const auto put = [&](Complex z) {
    detail::put_f64(out, z.real());
    detail::put_f64(out, z.imag());
  };
  for (Eigen::Index i = 0; i < n; ++i) put(s.phi[i]);
  for (const Kernel* k : {&s.gamma, &s.sigma})
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) put((*k)(i, j));
  return out;
}

inline HfbState decode_snapshot(const std::vector<unsigned char>& bytes) {
  detail::ByteReader in(bytes);
  in.expect_magic();
  const auto d = in.u64();
  const auto n = in.u64();
  const double l = in.f64();
  if (d < 1 || d > 3 || n < 2 || n > 4096) throw InvalidArgument("snapshot: implausible header");
  // Two-node reference systems are stored with n = 2, below make_grid's limit.
  const TorusGrid grid = n >= 4 ? make_grid(static_cast<int>(d), l, static_cast<int>(n))
                                : detail::unchecked_grid(static_cast<int>(d), l, static_cast<int>(n));
  HfbState s = vacuum_state(grid);
  const Eigen::Index size = grid.size();
  for (Eigen::Index i = 0; i < size; ++i) s.phi[i] = in.c128();
  for (Kernel* k : {&s.gamma, &s.sigma})
    for (Eigen::Index i = 0; i < size; ++i)
      for (Eigen::Index j = 0; j < size; ++j) (*k)(i, j) = in.c128();
  if (!in.at_end()) throw InvalidArgument("snapshot: trailing bytes after sigma block");
  return s;
}

inline void write_snapshot(const std::string& path, const HfbState& s) {
  const auto bytes = encode_snapshot(s);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("snapshot: cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidArgument("snapshot: write to '" + path + "' failed");
}

inline HfbState read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("snapshot: cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace hfb
