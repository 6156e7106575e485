#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hfb/grid.hpp"

namespace hfb {

/// Closed-form field vocabulary used for external potentials, pair
/// potentials and initial condensate profiles.
enum class FieldKind { Constant, Cosine, Gaussian, PlaneWave, Table, Random };

inline FieldKind field_kind_from_string(const std::string& name) {
  if (name == "constant" || name == "zero") return FieldKind::Constant;
  if (name == "cosine") return FieldKind::Cosine;
  if (name == "gaussian") return FieldKind::Gaussian;
  if (name == "plane-wave" || name == "plane_wave") return FieldKind::PlaneWave;
  if (name == "table") return FieldKind::Table;
  if (name == "random") return FieldKind::Random;
  throw InvalidArgument("unknown field spec '" + name + "'");
}

inline std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Constant: return "constant";
    case FieldKind::Cosine: return "cosine";
    case FieldKind::Gaussian: return "gaussian";
    case FieldKind::PlaneWave: return "plane-wave";
    case FieldKind::Table: return "table";
    case FieldKind::Random: return "random";
  }
  return "constant";
}

/// Parameters of a sampled field. Which members are read depends on kind:
///   constant    amplitude
///   cosine      amplitude * cos(2 pi m.x / L),  m = wave
///   gaussian    amplitude * sum_images exp(-|x - center|^2 / (2 width^2))
///   plane-wave  amplitude * exp(i 2 pi m.x / L)
///   table       explicit node values
///   random      band-limited complex field, |m_a| <= cutoff, drawn from seed
struct FieldSpec {
  FieldKind kind = FieldKind::Constant;
  double amplitude = 0.0;
  double width = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::array<int, 3> wave{1, 0, 0};
  std::vector<Complex> table;
  int cutoff = 2;
  std::uint64_t seed = 0;

  static FieldSpec constant(double value) {
    FieldSpec f;
    f.amplitude = value;
    return f;
  }
  static FieldSpec gaussian(double amplitude, double width, std::array<double, 3> center = {0.0, 0.0, 0.0}) {
    FieldSpec f;
    f.kind = FieldKind::Gaussian;
    f.amplitude = amplitude;
    f.width = width;
    f.center = center;
    return f;
  }
  static FieldSpec cosine(double amplitude, std::array<int, 3> wave) {
    FieldSpec f;
    f.kind = FieldKind::Cosine;
    f.amplitude = amplitude;
    f.wave = wave;
    return f;
  }
  static FieldSpec plane_wave(double amplitude, std::array<int, 3> wave) {
    FieldSpec f = cosine(amplitude, wave);
    f.kind = FieldKind::PlaneWave;
    return f;
  }
  static FieldSpec random(std::uint64_t seed, int cutoff, double amplitude = 1.0) {
    FieldSpec f;
    f.kind = FieldKind::Random;
    f.amplitude = amplitude;
    f.cutoff = cutoff;
    f.seed = seed;
    return f;
  }
};

namespace detail {

/// Number of image shells needed so that the Gaussian tail drops below
/// 1e-14 of its peak everywhere in the cell.
inline int gaussian_image_shells(double width, double length) {
  const double reach = width * std::sqrt(2.0 * std::log(1e14));
  return static_cast<int>(std::ceil(reach / length)) + 1;
}

inline double periodized_gaussian(const TorusGrid& grid, const std::array<double, 3>& x, double width,
                                  const std::array<double, 3>& center) {
  const int d = grid.dimension();
  const double length = grid.side_length();
  const int r = gaussian_image_shells(width, length);
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < d; ++a) {
    lo[a] = -r;
    hi[a] = r;
  }
  double sum = 0.0;
  for (int z0 = lo[0]; z0 <= hi[0]; ++z0) {
    for (int z1 = lo[1]; z1 <= hi[1]; ++z1) {
      for (int z2 = lo[2]; z2 <= hi[2]; ++z2) {
        const std::array<int, 3> z{z0, z1, z2};
        double dist2 = 0.0;
        for (int a = 0; a < d; ++a) {
          const double dx = x[a] - center[a] + z[a] * length;
          dist2 += dx * dx;
        }
        sum += std::exp(-dist2 / (2.0 * width * width));
      }
    }
  }
  return sum;
}

inline ComplexField random_band_limited(const TorusGrid& grid, int cutoff, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexField spectrum = ComplexField::Zero(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const auto m = grid.mode(i);
    bool inside = true;
    for (int a = 0; a < grid.dimension(); ++a) inside = inside && std::abs(m[a]) <= cutoff && 2 * std::abs(m[a]) < grid.points_per_axis();
    if (!inside) continue;
    const double re = normal(rng);
    const double im = normal(rng);
    spectrum[i] = Complex(re, im);
  }
  return fft_inverse(grid, spectrum) * static_cast<double>(grid.size()) / std::sqrt(grid.volume());
}

}  // namespace detail

/// Samples a closed-form field at every node.
inline ComplexField sample_field(const TorusGrid& grid, const FieldSpec& spec) {
  const Eigen::Index n = grid.size();
  ComplexField f(n);
  const double length = grid.side_length();
  const auto phase = [&](Eigen::Index i) {
    const auto x = grid.node(i);
    double p = 0.0;
    for (int a = 0; a < grid.dimension(); ++a) p += 2.0 * std::numbers::pi * spec.wave[a] * x[a] / length;
    return p;
  };
  switch (spec.kind) {
    case FieldKind::Constant:
      f.setConstant(spec.amplitude);
      break;
    case FieldKind::Cosine:
      for (Eigen::Index i = 0; i < n; ++i) f[i] = spec.amplitude * std::cos(phase(i));
      break;
    case FieldKind::PlaneWave:
      for (Eigen::Index i = 0; i < n; ++i) f[i] = spec.amplitude * std::exp(kI * phase(i));
      break;
    case FieldKind::Gaussian:
      if (!(spec.width > 0.0)) throw InvalidArgument("gaussian field: width must be positive");
      for (Eigen::Index i = 0; i < n; ++i)
        f[i] = spec.amplitude * detail::periodized_gaussian(grid, grid.node(i), spec.width, spec.center);
      break;
    case FieldKind::Table:
      if (static_cast<Eigen::Index>(spec.table.size()) != n)
        throw InvalidArgument("table field: expected " + std::to_string(n) + " values, got " +
                              std::to_string(spec.table.size()));
      for (Eigen::Index i = 0; i < n; ++i) f[i] = spec.table[static_cast<std::size_t>(i)];
      break;
    case FieldKind::Random:
      if (spec.cutoff < 0) throw InvalidArgument("random field: cutoff must be nonnegative");
      f = spec.amplitude * detail::random_band_limited(grid, spec.cutoff, spec.seed);
      break;
  }
  return f;
}

/// Real-valued sampling; rejects specs that produce complex values.
inline RealField sample_real_field(const TorusGrid& grid, const FieldSpec& spec) {
  const ComplexField f = sample_field(grid, spec);
  const double imag = f.size() ? f.imag().cwiseAbs().maxCoeff() : 0.0;
  if (imag > 1e-12 * std::max(1.0, f.cwiseAbs().maxCoeff()))
    throw InvalidArgument("field spec '" + to_string(spec.kind) + "' is not real-valued");
  return f.real();
}

/// Periodized pair interaction v_per sampled on node pairs.
struct PairKernel {
  TorusGrid grid;
  /// v_per(x_i) for every node offset x_i.
  RealField profile;
  /// V[i][j] = v_per(x_i - x_j); symmetric and circulant along each axis.
  RealKernel matrix;
  /// Unnormalized DFT of the profile, used for spectral convolutions.
  ComplexField spectrum;
};

inline PairKernel pair_kernel_from_profile(const TorusGrid& grid, RealField profile) {
  detail::require(profile.size() == grid.size(), "pair_kernel: profile length mismatch");
  double odd = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    odd = std::max(odd, 0.5 * std::abs(profile[i] - profile[grid.negated_index(i)]));
  const double scale = std::max(1.0, profile.size() ? profile.cwiseAbs().maxCoeff() : 0.0);
  if (odd > 1e-12 * scale)
    throw InvalidArgument("pair potential is not even: odd part " + std::to_string(odd));
  const Eigen::Index n = grid.size();
  RealKernel m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = profile[grid.difference_index(i, j)];
  ComplexField spectrum = fft_forward(grid, profile.cast<Complex>());
  return {grid, std::move(profile), std::move(m), std::move(spectrum)};
}

/// Samples the pair potential v and assembles its node-pair matrix.
inline PairKernel pair_kernel(const TorusGrid& grid, const FieldSpec& v) {
  return pair_kernel_from_profile(grid, sample_real_field(grid, v));
}

}  // namespace hfb
