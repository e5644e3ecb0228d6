#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "wavetorus/norms.hpp"

using namespace wavetorus;
using namespace wt_test;

TEST(NormE, HandEvaluatedExamples) {
  // cos(2x+3t): (|Q|/4) * 5 * (1/4 + 1/4) = 5 pi^2 / 4.
  EXPECT_NEAR(std::pow(norm_E(cosine(6, 1, 3)), 2), 5 * kPi * kPi / 4, 1e-12);
  EXPECT_NEAR(norm_E(cosine(4, 0, 0)), 1.0, 1e-15);
  // Resonant cos(2x+2t): 4 * 1 * (1/4 + 1/4) = 2.
  EXPECT_NEAR(std::pow(norm_E(cosine(4, 1, 2)), 2), 2.0, 1e-14);
}

TEST(NormEs, ExamplesAndErrors) {
  EXPECT_NEAR(norm_Es(cosine(6, 1, 3), 1.0), std::sqrt(5 * 0.5), 1e-14);
  for (double s : {0.1, 0.5, 1.0}) {
    const auto u = single_mode(3, 0, 1, 2.0);
    EXPECT_NEAR(norm_Es(u, s), 2.0, 1e-15);
  }
  try {
    norm_Es(cosine(4, 1, 2), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotInEperp);
  }
  EXPECT_THROW(norm_Es(cosine(4, 0, 1), 0.0), Error);
  EXPECT_THROW(norm_Es(cosine(4, 0, 1), 1.5), Error);
}

TEST(NormEs, MonotoneInExponentProperty) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = gaussian_field(rng, 10, SubspaceTag::Eperp);
    double prev = 0;
    for (double s : {0.1, 0.3, 0.6, 1.0}) {
      const double v = norm_Es(u, s);
      EXPECT_GE(v, prev * (1 - 1e-14));
      prev = v;
    }
    EXPECT_GE(norm_Es(u, 0.1), u.l2_norm() * (1 - 1e-14));
  }
}

TEST(Sobolev, ExamplesAndEquivalence) {
  EXPECT_NEAR(sobolev_norm(cosine(4, 0, 1), 1, SobolevConvention::Aniso), std::sqrt(0.5), 1e-15);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = gaussian_field(rng, 12);
    EXPECT_NEAR(sobolev_norm(u, 0, SobolevConvention::Aniso), u.l2_norm(), 1e-12 * u.l2_norm());
    EXPECT_NEAR(sobolev_norm(u, 0, SobolevConvention::Ell1), u.l2_norm(), 1e-12 * u.l2_norm());
    const double ratio = sobolev_norm(u, 1, SobolevConvention::Aniso) / sobolev_norm(u, 1, SobolevConvention::Ell1);
    EXPECT_GE(ratio, std::sqrt(0.5) - 1e-12);
    EXPECT_LE(ratio, 1.0 + 1e-12);
  }
  EXPECT_THROW(sobolev_norm(cosine(2, 0, 1), -1), Error);
  EXPECT_EQ(to_string(SobolevConvention::Ell1), "ell1");
}

TEST(NormLp, ClosedForms) {
  SpectralField c(4);
  c.at(0, 0) = -3.0;
  for (double p : {1.0, 2.0, 3.5})
    EXPECT_NEAR(norm_Lp(c, p), 3.0 * std::pow(kDomainMeasure, 1 / p), 1e-12);
  // int_0^pi dx int_0^2pi cos^2 t dt = pi * pi.
  EXPECT_NEAR(norm_Lp(cosine(4, 0, 1), 2), kPi, 1e-12);
  // int |cos t| = pi * 4; the kinks limit the trapezoid rule to second order.
  EXPECT_NEAR(norm_Lp(cosine(4, 0, 1), 1, 16), 4 * kPi, 1e-3 * 4 * kPi);
  EXPECT_NEAR(norm_Lp(c, 2, 4, Measure::Normalized), 3.0, 1e-12);
  EXPECT_THROW(norm_Lp(c, 0.5), Error);
  EXPECT_THROW(norm_Lp(c, 2, 1.0), Error);
  EXPECT_EQ(norm_Lp(SpectralField(3), 2), 0.0);
}

TEST(NormLp, ParsevalAtPTwoProperty) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto u = gaussian_field(rng, 3 + trial);
    EXPECT_NEAR(norm_Lp(u, 2), std::sqrt(kDomainMeasure) * u.l2_norm(), 1e-10 * norm_Lp(u, 2));
  }
}

TEST(NormLp, ComplexFieldsUseModulus) {
  // e^{i(2x+t)} has modulus one everywhere.
  const auto u = single_mode(3, 1, 1);
  EXPECT_NEAR(norm_Lp(u, 3, 4, Measure::Normalized), 1.0, 1e-13);
  EXPECT_NEAR(norm_C0(u), 1.0, 1e-13);
}

TEST(NormC0, BoundedByCoefficientSum) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = gaussian_field(rng, 8);
    EXPECT_LE(norm_C0(u), norm_lq(u, 1) * (1 + 1e-12));
    EXPECT_GE(norm_C0(u), norm_Lp(u, 2, 4, Measure::Normalized) * (1 - 1e-12));
  }
}

TEST(NormLq, ExamplesAndMonotonicity) {
  const auto one = single_mode(3, 1, 0, complex(0, 1));
  for (double q : {1.0, 1.5, 2.0, 7.0}) EXPECT_NEAR(norm_lq(one, q), 1.0, 1e-15);
  SpectralField two(3);
  two.at(0, 1) = 1.0;
  two.at(1, 0) = -1.0;
  EXPECT_NEAR(norm_lq(two, 1), 2.0, 1e-15);
  EXPECT_NEAR(norm_lq(two, 2), std::sqrt(2.0), 1e-15);
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const auto u = gaussian_field(rng, 9);
    double prev = std::numeric_limits<double>::infinity();
    for (double q : {1.0, 4.0 / 3, 2.0, 3.0, 4.0}) {
      const double v = norm_lq(u, q);
      EXPECT_LE(v, prev * (1 + 1e-14));
      prev = v;
    }
  }
  EXPECT_THROW(norm_lq(two, 0.5), Error);
}

TEST(Dyadic, BlockMembership) {
  EXPECT_EQ(dyadic_block_of(0), 0);
  EXPECT_EQ(dyadic_block_of(2), 0);
  EXPECT_EQ(dyadic_block_of(3), 1);
  EXPECT_EQ(dyadic_block_of(4), 1);
  EXPECT_EQ(dyadic_block_of(5), 2);
  EXPECT_EQ(dyadic_block_of(8), 2);
  EXPECT_EQ(dyadic_block_of(9), 3);
  for (int w = 3; w < 600; ++w) {
    const int m = dyadic_block_of(w);
    EXPECT_LT(1 << m, w);
    EXPECT_LE(w, 2 << m);
  }
  const auto d = dyadic_blocks(cosine(8, 1, 0));
  EXPECT_EQ(d.blocks[0].field, cosine(8, 1, 0));
  const auto e = dyadic_blocks(cosine(8, 0, 3));
  EXPECT_EQ(e.blocks[1].field, cosine(8, 0, 3));
  EXPECT_EQ(e.blocks[0].field.l2_norm(), 0.0);
}

TEST(Dyadic, PartitionProperty) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    const int M = 1 + 3 * trial;
    const auto u = gaussian_field(rng, M);
    const auto d = dyadic_blocks(u);
    EXPECT_EQ(d.sum(), u);
    EXPECT_EQ(static_cast<int>(d.blocks.size()), dyadic_block_of(M) + 1);
    double sq = 0;
    for (const auto& b : d.blocks) sq += b.field.squared_l2_norm();
    EXPECT_NEAR(sq, u.squared_l2_norm(), 1e-12 * u.squared_l2_norm());
  }
}

TEST(Holder, SingleBlockExamples) {
  EXPECT_NEAR(holder_estimate(cosine(8, 0, 3), 0.5), std::sqrt(2.0), 1e-12);
  for (double g : {0.1, 0.5, 0.9}) EXPECT_NEAR(holder_estimate(cosine(8, 1, 0), g), 1.0, 1e-12);
}

TEST(Holder, LacunarySeries) {
  for (double gamma : {0.3, 0.45, 0.7}) {
    SpectralField u(48);
    for (int m = 1; m <= 5; ++m) u += std::exp2(-gamma * m) * cosine(48, 0, 3 << (m - 1));
    EXPECT_NEAR(holder_estimate(u, gamma), 1.0, 0.01);
  }
}

TEST(Holder, HomogeneityAndMonotonicityProperty) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> scale(-5, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = gaussian_field(rng, 4 + trial % 30, SubspaceTag::All, 0.05);
    const double c = scale(rng);
    EXPECT_NEAR(holder_estimate(c * u, 0.5), std::abs(c) * holder_estimate(u, 0.5),
                1e-12 * std::abs(c) * holder_estimate(u, 0.5));
    EXPECT_LE(holder_estimate(u, 0.2), holder_estimate(u, 0.6));
  }
}

TEST(Quadrants, ExamplesAndIdentity) {
  const auto e = single_mode(4, 1, 1);
  const auto q = quadrant_split(e);
  EXPECT_EQ(q.pp, e);
  const auto c = quadrant_split(cosine(4, 1, 1));
  EXPECT_EQ(c.pp, single_mode(4, 1, 1, 0.5));
  EXPECT_EQ(c.mm, single_mode(4, -1, -1, 0.5));
  EXPECT_EQ(c.pm.l2_norm() + c.mp.l2_norm(), 0.0);
  // (0,-1) belongs to the j >= 0, k < 0 quadrant.
  EXPECT_EQ(quadrant_split(single_mode(4, 0, -1)).pm.l2_norm(), 1.0);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto u = gaussian_field(rng, 10);
    const auto p = quadrant_split(u);
    EXPECT_EQ(p.pp + p.pm + p.mp + p.mm, u);
    double sq = 0;
    for (const auto* part : p.all()) sq += std::pow(sobolev_norm(*part, 0.5, SobolevConvention::Ell1), 2);
    EXPECT_NEAR(sq, std::pow(sobolev_norm(u, 0.5, SobolevConvention::Ell1), 2), 1e-12 * sq);
  }
}
