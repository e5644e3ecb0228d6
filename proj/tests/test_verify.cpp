#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "wavetorus/verify.hpp"

using namespace wavetorus;
using namespace wt_test;

namespace {

// (1/2pi) int_0^{2pi} |cos|^p = Gamma((p+1)/2) / (sqrt(pi) Gamma(p/2 + 1)).
double mean_abs_cos_pow(double p) {
  return std::tgamma((p + 1) / 2) / (std::sqrt(kPi) * std::tgamma(p / 2 + 1));
}

EnsembleSpec small_ensemble(int size = 100, int M = 12, double decay = 0.25) {
  EnsembleSpec e;
  e.size = size;
  e.M = M;
  e.decay = decay;
  return e;
}

}  // namespace

TEST(Summary, QuantilesAndNaN) {
  std::vector<double> v;
  for (int i = 101; i >= 1; --i) v.push_back(i);
  const auto s = summarize(v);
  EXPECT_EQ(s.max, 101);
  EXPECT_EQ(s.mean, 51);
  EXPECT_EQ(s.q50, 51);
  EXPECT_EQ(s.q05, 6);
  EXPECT_EQ(s.q95, 96);
  v.push_back(std::numeric_limits<double>::quiet_NaN());
  EXPECT_TRUE(std::isnan(summarize(v).max));
  EXPECT_EQ(summarize({}).max, 0.0);
}

TEST(GagliardoNirenberg, ExponentsAndSingleMode) {
  EXPECT_DOUBLE_EQ(gn_exponent(3), 0.5);
  EXPECT_DOUBLE_EQ(gn_exponent(4), 2.0 / 3);
  for (double p : {3.0, 4.0}) {
    const double s = gn_exponent(p);
    // cos(2x+3t): ||.||_{L^2} = pi, ||.||_{E^1}^2 = 5 (1/4 + 1/4).
    const double lp = std::pow(kDomainMeasure * mean_abs_cos_pow(p), 1 / p);
    const double expected = lp / (std::pow(kPi, 1 - s) * std::pow(2.5, s / 2));
    // |cos|^3 has kinks at the zeros, so only p = 4 is integrated exactly.
    const double tol = p == 4.0 ? 1e-12 : 1e-5;
    EXPECT_NEAR(gn_ratio(cosine(6, 1, 3), p, 8), expected, tol * expected);
  }
  EXPECT_THROW(check_gn(small_ensemble(), 2.0), Error);
}

TEST(GagliardoNirenberg, EnsembleDeterministicAndFinite) {
  const auto a = check_gn(small_ensemble(), 3), b = check_gn(small_ensemble(), 3);
  EXPECT_EQ(a.per_trial, b.per_trial);
  EXPECT_EQ(a.violation_count, 0);
  EXPECT_EQ(a.ensemble_size, 100);
  EXPECT_EQ(a.parameters.at("p"), 3.0);
  EXPECT_EQ(a.parameters.at("M"), 12.0);
  EXPECT_TRUE(std::isfinite(a.ratios.max));
}

TEST(Embedding, ExponentAndSingleMode) {
  EXPECT_DOUBLE_EQ(embedding_exponent(0.5), 3.0);
  // e^{it}: |u| = 1, symbol -1, so ||u||_{E^s} = 1 and the ratio is |Q|^{1/p}.
  const auto u = single_mode(4, 0, 1);
  for (double s : {0.25, 0.5, 0.75})
    EXPECT_NEAR(embedding_ratio(u, s), std::pow(kDomainMeasure, 1 / embedding_exponent(s)), 1e-12);
  EXPECT_THROW(check_embedding(small_ensemble(), 1.0), Error);
}

TEST(Embedding, TailRatiosFall) {
  auto spec = small_ensemble(40);
  const auto study = embedding_tail_study(spec, 0.5, {4, 8, 16});
  ASSERT_EQ(study.max_ratio.size(), 3u);
  EXPECT_TRUE(study.strictly_decreasing);
  EXPECT_THROW(embedding_tail_study(spec, 0.5, {0}), Error);
}

TEST(HausdorffYoung, EqualityWitnessAndParseval) {
  // A single character has |u| = 1 and a single unit coefficient.
  for (double p : {1.2, 4.0 / 3, 2.0}) EXPECT_NEAR(hausdorff_young_ratio(single_mode(3, 1, 1), p), 1.0, 1e-12);
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial)
    EXPECT_NEAR(hausdorff_young_ratio(gaussian_field(rng, 8), 2.0), 1.0, 1e-12);
}

TEST(HausdorffYoung, NoViolations) {
  const auto r = check_hausdorff_young(small_ensemble(200), 4.0 / 3);
  EXPECT_EQ(r.violation_count, 0);
  EXPECT_LE(r.ratios.max, 1.0);
  EXPECT_THROW(check_hausdorff_young(small_ensemble(), 2.5), Error);
}

TEST(HolderToSobolev, SingleBlockClosedForm) {
  // cos(3t): quadrants hold 1/2 at (0,3) and (0,-3); ell1 weight 3^2, so each has
  // H^{1/2} norm sqrt(3)/2. Block 1 with sup 1 gives a Holder proxy 2^{0.6}.
  const double r = holder_to_sobolev_ratio(cosine(8, 0, 3), 0.6, 0.5);
  EXPECT_NEAR(r, std::sqrt(3.0) / 2 / std::pow(2.0, 0.6), 1e-12);
  const auto rep = check_holder_to_sobolev(small_ensemble(), 0.6, 0.5);
  EXPECT_EQ(rep.violation_count, 0);
  EXPECT_THROW(check_holder_to_sobolev(small_ensemble(), 0.5, 0.6), Error);
}

TEST(Box, RoundTripAndH1Bound) {
  const auto spec = small_ensemble(200, 16, 0.0);
  const auto rt = check_box_roundtrip(spec);
  EXPECT_EQ(rt.violation_count, 0);
  EXPECT_LE(rt.ratios.max, 1e-12);
  const auto h1 = check_h1_bound(spec);
  EXPECT_EQ(h1.violation_count, 0);
  EXPECT_LE(h1.ratios.max, 1.0 + 1e-12);
  const auto reg = check_box_regularity(small_ensemble(), 1.5, 0.3);
  EXPECT_TRUE(std::isfinite(reg.ratios.max));
  EXPECT_EQ(reg.violation_count, 0);
}

TEST(Reports, JsonAndCsv) {
  const auto r = check_hausdorff_young(small_ensemble(5), 1.5);
  const auto j = to_json(r);
  EXPECT_EQ(j["name"], "hausdorff_young");
  EXPECT_EQ(j["ensemble_size"], 5);
  EXPECT_EQ(j["violation_count"], 0);
  EXPECT_TRUE(j["ratios"].contains("q95"));
  const auto csv = per_trial_csv(r);
  EXPECT_EQ(csv.rfind("trial,ratio\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(Mms, GeometricDecay) {
  const auto nl = make_nonlinearity(default_cubic_spec());
  const auto table = mms_run(nl, 0.5, {8, 12, 16}, 1e-3);
  ASSERT_EQ(table.rows.size(), 3u);
  for (const auto& row : table.rows) {
    EXPECT_TRUE(row.failure.empty()) << row.failure;
    EXPECT_LE(row.residual_norm, 1e-10);
    EXPECT_LE(row.newton_iters, 10);
  }
  EXPECT_LE(table.worst_ratio(), std::exp(-0.5 * 4) * 1.5);
  const auto j = to_json(table);
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_FALSE(j["rows"][0].contains("seconds"));
}

TEST(Mms, BandlimitedTargetIsExact) {
  const auto nl = make_nonlinearity(default_cubic_spec());
  const auto table = mms_run(nl, 0.5, {8}, 1e-3);
  EXPECT_LE(table.rows[0].error_l2, 1e-9);
}

TEST(Mms, FlatTargetStillProducesTable) {
  const auto nl = make_nonlinearity(default_cubic_spec());
  MmsOptions opt;
  opt.newton.max_iter = 8;
  const auto table = mms_run(nl, 0.0, {4, 8}, 1e-3, opt);
  EXPECT_EQ(table.rows.size(), 2u);
  EXPECT_THROW(mms_run(nl, 0.5, {}, 1e-3), Error);
  EXPECT_THROW(mms_run(nl, 0.5, {8, 8}, 1e-3), Error);
  EXPECT_THROW(mms_run(nl, -1.0, {8}, 1e-3), Error);
}

TEST(Apriori, ConstantTraceHasUnitRatios) {
  auto p = PenalizedProblem<>{8, 1e-1, 1, make_nonlinearity(default_cubic_spec())};
  const auto target = 0.25 * random_field(301, 8, SubspaceTag::Eperp, 0.5);
  p.forcing = residual(p, target);
  const auto trace = continuation_beta(p, {1e-1, 0.1, 1e-4}, SpectralField(8));
  ASSERT_TRUE(trace.completed());
  const auto rep = apriori_monitor(trace);
  EXPECT_TRUE(rep.all_within());
  ASSERT_EQ(rep.quantities.size(), 6u);
  for (const auto& q : rep.quantities) EXPECT_NEAR(q.ratio, 1.0, 1e-8) << q.name;
}

TEST(Apriori, SingleRowAndFlagging) {
  ContinuationTrace one;
  one.rows.push_back({});
  one.solutions.push_back(cosine(6, 1, 2) + cosine(6, 0, 1));
  for (const auto& q : apriori_monitor(one).quantities) EXPECT_EQ(q.ratio, 1.0);

  ContinuationTrace two = one;
  two.rows.push_back({});
  two.solutions.push_back(cosine(6, 1, 2, 20.0) + cosine(6, 0, 1));
  const auto rep = apriori_monitor(two);
  EXPECT_FALSE(rep.all_within());
  EXPECT_NEAR(rep.quantities[0].ratio, 20.0, 1e-10);
  EXPECT_TRUE(rep.quantities[0].flagged);
  EXPECT_FALSE(rep.quantities[4].flagged);  // w_h1 is unchanged

  EXPECT_THROW(apriori_monitor(ContinuationTrace{}), Error);
}
