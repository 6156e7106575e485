#include <gtest/gtest.h>

#include <random>

#include "hfb/field.hpp"
#include "support/helpers.hpp"

using namespace hfb;
using testing_support::kTwoPi;

namespace {

ComplexField random_field(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  ComplexField f(n);
  for (auto& z : f) z = Complex(g(rng), g(rng));
  return f;
}

ComplexField plane_wave(const TorusGrid& grid, std::array<int, 3> m) {
  ComplexField f(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const auto x = grid.node(i);
    double p = 0.0;
    for (int a = 0; a < grid.dimension(); ++a) p += kTwoPi * m[a] * x[a] / grid.side_length();
    f[i] = std::polar(1.0, p);
  }
  return f;
}

}  // namespace

TEST(Grid, OneDimensionalLayout) {
  const TorusGrid g = make_grid(1, kTwoPi, 8);
  EXPECT_DOUBLE_EQ(g.spacing(), kTwoPi / 8);
  EXPECT_DOUBLE_EQ(g.weight(), kTwoPi / 8);
  std::vector<int> freqs;
  for (Eigen::Index i = 0; i < g.size(); ++i) freqs.push_back(g.mode(i)[0]);
  std::sort(freqs.begin(), freqs.end());
  EXPECT_EQ(freqs, (std::vector<int>{-3, -2, -1, 0, 1, 2, 3, 4}));
}

TEST(Grid, TwoDimensionalWeight) {
  const TorusGrid g = make_grid(2, 1.0, 4);
  EXPECT_EQ(g.size(), 16);
  EXPECT_DOUBLE_EQ(g.weight(), 1.0 / 16);
  // Row-major: axis 0 varies slowest.
  EXPECT_DOUBLE_EQ(g.node(1)[1], 0.25);
  EXPECT_DOUBLE_EQ(g.node(4)[0], 0.25);
}

TEST(Grid, RejectsBadParameters) {
  EXPECT_THROW(make_grid(1, kTwoPi, 6), InvalidArgument);
  EXPECT_THROW(make_grid(1, kTwoPi, 2), InvalidArgument);
  EXPECT_THROW(make_grid(0, 1.0, 8), InvalidArgument);
  EXPECT_THROW(make_grid(4, 1.0, 8), InvalidArgument);
  EXPECT_THROW(make_grid(1, 0.0, 8), InvalidArgument);
  EXPECT_THROW(make_grid(1, -1.0, 8), InvalidArgument);
}

TEST(Grid, FrequencyLatticeClosedUnderNegationExceptNyquist) {
  const TorusGrid g = make_grid(2, 3.0, 8);
  int unmatched = 0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const auto m = g.mode(i);
    bool found = false;
    for (Eigen::Index j = 0; j < g.size() && !found; ++j) {
      const auto q = g.mode(j);
      found = q[0] == -m[0] && q[1] == -m[1];
    }
    if (!found) {
      ++unmatched;
      EXPECT_TRUE(m[0] == 4 || m[1] == 4);
    }
  }
  EXPECT_GT(unmatched, 0);
}

TEST(Grid, ParsevalWithDocumentedNormalization) {
  for (int d = 1; d <= 3; ++d) {
    const TorusGrid g = make_grid(d, 1.7, 8);
    const ComplexField f = random_field(g.size(), 3u + d);
    const ComplexField spec = fft_forward(g, f);
    const double lhs = g.weight() * f.squaredNorm();
    const double rhs = g.volume() / std::pow(static_cast<double>(g.size()), 2) * spec.squaredNorm();
    EXPECT_NEAR(lhs, rhs, 1e-12 * lhs) << "d=" << d;
    EXPECT_LT((fft_inverse(g, spec) - f).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Multiplier, IdentitySymbolIsIdentity) {
  const TorusGrid g = make_grid(2, 2.0, 8);
  const ComplexField f = random_field(g.size(), 9);
  EXPECT_LT((apply_multiplier(identity_multiplier(g), f) - f).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Multiplier, LaplacianOnConstantAndPlaneWave) {
  const TorusGrid g = make_grid(2, kTwoPi, 8);
  EXPECT_LT(apply_multiplier(laplacian(g), ComplexField::Constant(g.size(), 2.5)).cwiseAbs().maxCoeff(), 1e-13);
  const ComplexField e = plane_wave(g, {2, -3, 0});
  const double k2 = 4.0 + 9.0;
  EXPECT_LT((apply_multiplier(laplacian(g), e) + k2 * e).cwiseAbs().maxCoeff(), 1e-12);
  const ComplexField me = apply_multiplier(sobolev_weight(g), e);
  EXPECT_LT((me - std::sqrt(1.0 + k2) * e).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Multiplier, CompositionMultipliesSymbols) {
  const TorusGrid g = make_grid(1, 3.0, 16);
  const ComplexField f = random_field(g.size(), 4);
  const auto a = laplacian(g);
  const auto b = sobolev_weight(g, 0.5);
  const ComplexField two_steps = apply_multiplier(a, apply_multiplier(b, f));
  EXPECT_LT((apply_multiplier(compose(a, b), f) - two_steps).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Multiplier, RealEvenSymbolIsSelfAdjointInWeightedProduct) {
  const TorusGrid g = make_grid(1, 3.0, 16);
  const auto op = sobolev_weight(g, 1.0);
  const ComplexField f = random_field(g.size(), 5), h = random_field(g.size(), 6);
  const Complex lhs = g.weight() * f.dot(apply_multiplier(op, h));
  const Complex rhs = g.weight() * apply_multiplier(op, f).dot(h);
  EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(lhs));
  EXPECT_LT(hermiticity_defect(multiplier_matrix(op)), 1e-13);
}

TEST(Multiplier, RejectsSizeMismatch) {
  const TorusGrid g = make_grid(1, 3.0, 16);
  EXPECT_THROW(apply_multiplier(laplacian(g), ComplexField::Zero(8)), InvalidArgument);
}

TEST(SampleField, ConstantZeroAndCosine) {
  const TorusGrid g = make_grid(1, kTwoPi, 8);
  EXPECT_EQ(sample_field(g, FieldSpec::constant(0.0)).cwiseAbs().maxCoeff(), 0.0);
  const ComplexField c = sample_field(g, FieldSpec::cosine(1.0, {1, 0, 0}));
  for (Eigen::Index i = 0; i < g.size(); ++i) EXPECT_NEAR(c[i].real(), std::cos(kTwoPi * i / 8.0), 1e-15);
}

TEST(SampleField, NarrowPeriodizedGaussianMatchesSingleImage) {
  const TorusGrid g = make_grid(1, 10.0, 64);
  const double s = 0.4;
  const ComplexField f = sample_field(g, FieldSpec::gaussian(1.0, s, {5.0, 0.0, 0.0}));
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double dx = g.node(i)[0] - 5.0;
    EXPECT_NEAR(f[i].real(), std::exp(-dx * dx / (2 * s * s)), 1e-12);
  }
}

TEST(SampleField, WideGaussianSumsImages) {
  // Direct image sum with a generous fixed number of shells.
  const TorusGrid g = make_grid(1, 2.0, 16);
  const double s = 1.5;
  const ComplexField f = sample_field(g, FieldSpec::gaussian(0.7, s));
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    double ref = 0.0;
    for (int z = -40; z <= 40; ++z) {
      const double dx = g.node(i)[0] + 2.0 * z;
      ref += std::exp(-dx * dx / (2 * s * s));
    }
    EXPECT_NEAR(f[i].real(), 0.7 * ref, 1e-12 * ref);
  }
}

TEST(SampleField, UnknownNameAndBadTable) {
  EXPECT_THROW(field_kind_from_string("lorentzian"), InvalidArgument);
  EXPECT_EQ(field_kind_from_string("zero"), FieldKind::Constant);
  FieldSpec t;
  t.kind = FieldKind::Table;
  t.table = {1.0, 2.0};
  EXPECT_THROW(sample_field(make_grid(1, 1.0, 4), t), InvalidArgument);
  EXPECT_THROW(sample_real_field(make_grid(1, 1.0, 4), FieldSpec::plane_wave(1.0, {1, 0, 0})), InvalidArgument);
}

TEST(SampleField, RandomFieldIsResolutionIndependent) {
  const ComplexField a = sample_field(make_grid(1, kTwoPi, 16), FieldSpec::random(3, 3));
  const ComplexField b = sample_field(make_grid(1, kTwoPi, 64), FieldSpec::random(3, 3));
  for (Eigen::Index i = 0; i < 16; ++i) EXPECT_LT(std::abs(a[i] - b[4 * i]), 1e-12);
}

TEST(PairKernel, ZeroAndConstant) {
  const TorusGrid g = make_grid(1, kTwoPi, 8);
  EXPECT_EQ(pair_kernel(g, FieldSpec::constant(0.0)).matrix.cwiseAbs().maxCoeff(), 0.0);
  const PairKernel c = pair_kernel(g, FieldSpec::constant(0.3));
  EXPECT_EQ((c.matrix.array() - 0.3).abs().maxCoeff(), 0.0);
}

TEST(PairKernel, GaussianIsSymmetricCirculant) {
  const TorusGrid g = make_grid(1, kTwoPi, 8);
  const PairKernel v = pair_kernel(g, FieldSpec::gaussian(0.5, 0.3));
  EXPECT_EQ((v.matrix - v.matrix.transpose()).cwiseAbs().maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < 8; ++i) {
    for (Eigen::Index j = 0; j < 8; ++j) EXPECT_EQ(v.matrix(i, j), v.matrix((i + 1) % 8, (j + 1) % 8));
    // Row 0 holds v_per(x_0 - x_j) = v_per(-x_j); by evenness this is the sampled profile.
    double ref = 0.0;
    for (int z = -5; z <= 5; ++z) {
      const double dx = g.node(i)[0] + kTwoPi * z;
      ref += 0.5 * std::exp(-dx * dx / (2 * 0.09));
    }
    EXPECT_NEAR(v.matrix(0, i), ref, 1e-15);
  }
}

TEST(PairKernel, TwoDimensionalCirculantPerAxis) {
  const TorusGrid g = make_grid(2, 3.0, 4);
  const PairKernel v = pair_kernel(g, FieldSpec::gaussian(1.0, 0.5));
  for (Eigen::Index i = 0; i < g.size(); ++i)
    for (Eigen::Index j = 0; j < g.size(); ++j) EXPECT_EQ(v.matrix(i, j), v.profile[g.difference_index(i, j)]);
}

TEST(PairKernel, RejectsOddPotential) {
  const TorusGrid g = make_grid(1, kTwoPi, 8);
  EXPECT_THROW(pair_kernel(g, FieldSpec::gaussian(1.0, 0.3, {0.2, 0.0, 0.0})), InvalidArgument);
  FieldSpec odd;
  odd.kind = FieldKind::Table;
  odd.table = {0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0};
  EXPECT_THROW(pair_kernel(g, odd), InvalidArgument);
  EXPECT_NO_THROW(pair_kernel(g, FieldSpec::cosine(1.0, {1, 0, 0})));
}
