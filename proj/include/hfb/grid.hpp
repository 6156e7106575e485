#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "hfb/types.hpp"

namespace hfb {

class TorusGrid;
TorusGrid make_grid(int d, double l, int n);
namespace detail {
TorusGrid unchecked_grid(int d, double l, int n);
}

/// Uniform periodic grid on the torus [0,L)^d with n points per axis.
///
/// Nodes are laid out row-major over the axes (axis 0 varies slowest). The
/// frequency lattice is k = 2*pi*m/L with integer m in (-n/2, n/2]; the
/// Laplacian -Delta corresponds to the symbol |k|^2.
///
/// DFT convention: the forward transform is unnormalized,
///   F_m = sum_i f_i exp(-i k_m . x_i),
/// the inverse carries 1/N. Parseval then reads
///   w sum_i |f_i|^2 = (L^d / N^2) sum_m |F_m|^2.
class TorusGrid {
 public:
  TorusGrid() = default;

  int dimension() const { return dim_; }
  double side_length() const { return length_; }
  int points_per_axis() const { return n_; }
  double spacing() const { return length_ / n_; }
  /// Quadrature weight w = h^d.
  double weight() const { return std::pow(spacing(), dim_); }
  /// Total node count N = n^d.
  Eigen::Index size() const {
    Eigen::Index total = 1;
    for (int a = 0; a < dim_; ++a) total *= n_;
    return total;
  }
  double volume() const { return std::pow(length_, dim_); }

  /// Per-axis integer index of node i.
  std::array<int, 3> multi_index(Eigen::Index i) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(i % n_);
      i /= n_;
    }
    return idx;
  }

  Eigen::Index flat_index(const std::array<int, 3>& idx) const {
    Eigen::Index i = 0;
    for (int a = 0; a < dim_; ++a) i = i * n_ + ((idx[a] % n_) + n_) % n_;
    return i;
  }

  std::array<double, 3> node(Eigen::Index i) const {
    const auto idx = multi_index(i);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) x[a] = idx[a] * spacing();
    return x;
  }

  /// Integer frequency m in (-n/2, n/2] for per-axis index q.
  int frequency_of(int q) const { return q <= n_ / 2 ? q : q - n_; }

  std::array<int, 3> mode(Eigen::Index i) const {
    auto idx = multi_index(i);
    for (int a = 0; a < dim_; ++a) idx[a] = frequency_of(idx[a]);
    return idx;
  }

  std::array<double, 3> wavevector(Eigen::Index i) const {
    const auto m = mode(i);
    std::array<double, 3> k{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) k[a] = 2.0 * std::numbers::pi * m[a] / length_;
    return k;
  }

  double k_squared(Eigen::Index i) const {
    const auto k = wavevector(i);
    return k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  }

  /// Flat index of the node at x_i - x_j (mod L) for every axis.
  Eigen::Index difference_index(Eigen::Index i, Eigen::Index j) const {
    const auto a = multi_index(i);
    const auto b = multi_index(j);
    return flat_index({a[0] - b[0], a[1] - b[1], a[2] - b[2]});
  }

  /// Flat index of the node at -x_i (mod L).
  Eigen::Index negated_index(Eigen::Index i) const {
    const auto a = multi_index(i);
    return flat_index({-a[0], -a[1], -a[2]});
  }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  friend TorusGrid make_grid(int, double, int);
  friend TorusGrid detail::unchecked_grid(int, double, int);

  TorusGrid(int d, double l, int n) : dim_(d), length_(l), n_(n) {}

  int dim_ = 1;
  double length_ = 1.0;
  int n_ = 4;
};

inline TorusGrid make_grid(int d, double l, int n) {
  if (d < 1 || d > 3) throw InvalidArgument("grid: dimension must be 1, 2 or 3, got " + std::to_string(d));
  if (!(l > 0.0) || !std::isfinite(l)) throw InvalidArgument("grid: side length must be positive");
  if (n < 4 || !std::has_single_bit(static_cast<unsigned>(n)))
    throw InvalidArgument("grid: points per axis must be a power of two >= 4, got " + std::to_string(n));
  return TorusGrid(d, l, n);
}

/// Skips the n >= 4 restriction; only used for the two-node reference system.
inline TorusGrid detail::unchecked_grid(int d, double l, int n) { return TorusGrid(d, l, n); }

// ---------------------------------------------------------------------------
// Spectral transforms

namespace detail {

template <bool Inverse>
void fft_axes(const TorusGrid& grid, ComplexField& f) {
  const int n = grid.points_per_axis();
  const int d = grid.dimension();
  const Eigen::Index total = grid.size();
  Eigen::FFT<double> engine;
  std::vector<Complex> line(n), out(n);
  for (int axis = 0; axis < d; ++axis) {
    Eigen::Index stride = 1;
    for (int a = axis + 1; a < d; ++a) stride *= n;
    const Eigen::Index block = stride * n;
    for (Eigen::Index base = 0; base < total; base += block) {
      for (Eigen::Index off = 0; off < stride; ++off) {
        for (int q = 0; q < n; ++q) line[q] = f[base + off + q * stride];
        if constexpr (Inverse) {
          engine.inv(out, line);
        } else {
          engine.fwd(out, line);
        }
        for (int q = 0; q < n; ++q) f[base + off + q * stride] = out[q];
      }
    }
  }
}

}  // namespace detail

/// Unnormalized forward DFT over all axes.
inline ComplexField fft_forward(const TorusGrid& grid, ComplexField f) {
  detail::require_length(f, grid.size(), "fft_forward");
  detail::fft_axes<false>(grid, f);
  return f;
}

/// Inverse DFT (includes the 1/N factor).
inline ComplexField fft_inverse(const TorusGrid& grid, ComplexField f) {
  detail::require_length(f, grid.size(), "fft_inverse");
  detail::fft_axes<true>(grid, f);
  return f;
}

// ---------------------------------------------------------------------------
// Fourier multipliers

/// Operator acting diagonally in Fourier space: f -> IDFT(s * DFT(f)).
struct MultiplierOperator {
  TorusGrid grid;
  ComplexField symbol;
};

inline MultiplierOperator make_multiplier(const TorusGrid& grid, auto&& symbol_of_k_squared) {
  ComplexField s(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) s[i] = symbol_of_k_squared(grid.k_squared(i));
  return {grid, std::move(s)};
}

/// Delta, symbol -|k|^2.
inline MultiplierOperator laplacian(const TorusGrid& grid) {
  return make_multiplier(grid, [](double k2) { return Complex(-k2, 0.0); });
}

/// M^p with M = sqrt(1 - Delta), symbol (1 + |k|^2)^(p/2).
inline MultiplierOperator sobolev_weight(const TorusGrid& grid, double power = 1.0) {
  return make_multiplier(grid, [power](double k2) { return Complex(std::pow(1.0 + k2, 0.5 * power), 0.0); });
}

inline MultiplierOperator identity_multiplier(const TorusGrid& grid) {
  return make_multiplier(grid, [](double) { return Complex(1.0, 0.0); });
}

inline ComplexField apply_multiplier(const MultiplierOperator& op, const ComplexField& f) {
  detail::require_length(f, op.grid.size(), "apply_multiplier");
  detail::require_length(op.symbol, op.grid.size(), "apply_multiplier symbol");
  ComplexField spectrum = fft_forward(op.grid, f);
  spectrum.array() *= op.symbol.array();
  return fft_inverse(op.grid, std::move(spectrum));
}

/// Multiplier whose symbol is the product of the two symbols.
inline MultiplierOperator compose(const MultiplierOperator& a, const MultiplierOperator& b) {
  detail::require(a.grid == b.grid, "compose: multipliers live on different grids");
  return {a.grid, a.symbol.cwiseProduct(b.symbol)};
}

/// Dense N x N matrix of the multiplier acting on node samples: (Af)_i = sum_j A_ij f_j.
inline Kernel multiplier_matrix(const MultiplierOperator& op) {
  const Eigen::Index n = op.grid.size();
  Kernel m(n, n);
  ComplexField e = ComplexField::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e.setZero();
    e[j] = 1.0;
    m.col(j) = apply_multiplier(op, e);
  }
  return m;
}

/// Applies a multiplier matrix to the row variable of a kernel (left action).
inline Kernel apply_left(const MultiplierOperator& op, const Kernel& k) {
  Kernel out(k.rows(), k.cols());
  for (Eigen::Index j = 0; j < k.cols(); ++j) out.col(j) = apply_multiplier(op, k.col(j));
  return out;
}

}  // namespace hfb
