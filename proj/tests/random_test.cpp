#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <cmath>
#include <functional>
#include <map>

#include "fraudgraph/errors.hpp"
#include "fraudgraph/random.hpp"

namespace fraudgraph {
namespace {

// One-sample Kolmogorov-Smirnov statistic.
double KsStatistic(std::vector<double> xs,
                   const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n,
                  static_cast<double>(i + 1) / n - f});
  }
  return d;
}

constexpr int kDraws = 20000;
// Critical value at alpha = 0.001.
const double kKsCritical = 1.95 / std::sqrt(static_cast<double>(kDraws));

std::vector<double> Draw(const std::function<double(RandomStream&)>& f,
                         const char* label) {
  RandomStream rng(2024, label);
  std::vector<double> xs(kDraws);
  for (double& x : xs) x = f(rng);
  return xs;
}

TEST(RandomStream, SameSeedAndLabelRepeat) {
  RandomStream a(42, "legit");
  RandomStream b(42, "legit");
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.NextU64(), b.NextU64());
}

TEST(RandomStream, LabelsAndSeedsDecorrelate) {
  RandomStream a(42, "legit");
  RandomStream b(42, "ring/0");
  RandomStream c(43, "legit");
  const auto x = a.NextU64();
  EXPECT_NE(x, b.NextU64());
  EXPECT_NE(x, c.NextU64());
}

TEST(RandomStream, ChildMatchesJoinedLabel) {
  RandomStream parent(7, "legit");
  parent.NextU64();  // child derivation ignores parent state
  RandomStream child = parent.Child("catalog");
  RandomStream direct(7, "legit/catalog");
  for (int i = 0; i < 10; ++i) ASSERT_EQ(child.NextU64(), direct.NextU64());
}

TEST(RandomStream, FirstWordIsFrozen) {
  // Engine seed = splitmix64(seed ^ fnv1a64(label)); freezing one word pins
  // the stream contract across platforms.
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  std::mt19937_64 engine(SplitMix64(42 ^ Fnv1a64("legit")));
  RandomStream rng(42, "legit");
  EXPECT_EQ(rng.NextU64(), engine());
}

TEST(RandomStream, UniformRanges) {
  RandomStream rng(1, "u");
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.NextUniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.NextOpenUniform();
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(Samplers, NormalMatchesCdf) {
  const auto xs = Draw([](RandomStream& r) { return SampleNormal(r, 3.0, 2.0); },
                       "normal");
  boost::math::normal_distribution<> d(3.0, 2.0);
  EXPECT_LT(KsStatistic(xs, [&](double x) { return cdf(d, x); }), kKsCritical);
}

TEST(Samplers, GammaMatchesCdf) {
  for (double shape : {0.5, 2.0, 7.5}) {
    const auto xs = Draw(
        [&](RandomStream& r) { return SampleGamma(r, shape, 180.0); }, "gamma");
    boost::math::gamma_distribution<> d(shape, 180.0);
    EXPECT_LT(KsStatistic(xs, [&](double x) { return cdf(d, x); }), kKsCritical)
        << "shape " << shape;
  }
}

TEST(Samplers, LognormalMatchesCdf) {
  const auto xs = Draw(
      [](RandomStream& r) { return SampleLognormal(r, 6.1, 0.7); }, "lognormal");
  boost::math::lognormal_distribution<> d(6.1, 0.7);
  EXPECT_LT(KsStatistic(xs, [&](double x) { return cdf(d, x); }), kKsCritical);
}

TEST(Samplers, UniformRealMatchesCdf) {
  const auto xs = Draw(
      [](RandomStream& r) { return SampleUniformReal(r, 4.6, 5.0); }, "ureal");
  EXPECT_LT(KsStatistic(xs,
                        [](double x) { return std::clamp((x - 4.6) / 0.4, 0.0, 1.0); }),
            kKsCritical);
}

TEST(Samplers, PoissonMatchesPmf) {
  for (double rate : {0.3, 2.2, 40.0}) {
    RandomStream rng(9, "poisson");
    std::map<std::int64_t, int> counts;
    for (int i = 0; i < kDraws; ++i) ++counts[SamplePoisson(rng, rate)];
    boost::math::poisson_distribution<> d(rate);
    // Chi-square over cells with expected count >= 5, tail pooled.
    double chi2 = 0.0;
    int cells = 0;
    double pooled_obs = 0.0, pooled_exp = 0.0;
    for (std::int64_t k = 0; k < 200; ++k) {
      const double expected = kDraws * pdf(d, static_cast<double>(k));
      const double observed = counts.count(k) ? counts[k] : 0;
      if (expected >= 5.0) {
        chi2 += (observed - expected) * (observed - expected) / expected;
        ++cells;
      } else {
        pooled_obs += observed;
        pooled_exp += expected;
      }
    }
    if (pooled_exp > 0) {
      chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
      ++cells;
    }
    // 99.9th percentile of chi-square with (cells - 1) dof, loosely bounded
    // by dof + 4.5 sqrt(2 dof) + 10.
    const double dof = cells - 1;
    EXPECT_LT(chi2, dof + 4.5 * std::sqrt(2 * dof) + 10) << "rate " << rate;
  }
}

TEST(Samplers, UniformIntCoversInclusiveRange) {
  RandomStream rng(3, "uint");
  std::map<std::int64_t, int> counts;
  for (int i = 0; i < 60000; ++i) ++counts[SampleUniformInt(rng, 1, 6)];
  ASSERT_EQ(counts.size(), 6u);
  EXPECT_EQ(counts.begin()->first, 1);
  EXPECT_EQ(counts.rbegin()->first, 6);
  for (const auto& [k, c] : counts) EXPECT_NEAR(c, 10000, 500) << k;
  EXPECT_EQ(SampleUniformInt(rng, 5, 5), 5);
}

TEST(Samplers, BernoulliAndCategoricalFrequencies) {
  RandomStream rng(4, "cat");
  int hits = 0;
  for (int i = 0; i < kDraws; ++i) hits += SampleBernoulli(rng, 0.68);
  EXPECT_NEAR(hits / double(kDraws), 0.68, 0.012);
  const std::vector<double> w = {0.58, 0.30, 0.12};
  std::vector<int> counts(3, 0);
  for (int i = 0; i < kDraws; ++i) ++counts[SampleCategorical(rng, w)];
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(counts[k] / double(kDraws), w[k], 0.012);
}

TEST(DistributionSpec, ValidateRejectsBadParameters) {
  EXPECT_THROW(DistributionSpec::Gamma(0.0, 1.0).Validate(), ConfigError);
  EXPECT_THROW(DistributionSpec::Poisson(-1.0).Validate(), ConfigError);
  EXPECT_THROW(DistributionSpec::UniformInt(3, 2).Validate(), ConfigError);
  EXPECT_THROW(DistributionSpec::Bernoulli(1.5).Validate(), ConfigError);
  EXPECT_THROW(DistributionSpec::Categorical({0.5, 0.2}).Validate(),
               ConfigError);
  EXPECT_NO_THROW(DistributionSpec::Categorical({0.5, 0.5}).Validate());
  RandomStream rng(1, "x");
  EXPECT_THROW(Sample(DistributionSpec::Lognormal(0, -1), rng), ConfigError);
}

TEST(DistributionSpec, SampleMeansMatchAnalytic) {
  const std::vector<DistributionSpec> specs = {
      DistributionSpec::Gamma(2, 180),     DistributionSpec::Poisson(2.2),
      DistributionSpec::Lognormal(6.1, 0.7), DistributionSpec::UniformReal(0, 7),
      DistributionSpec::UniformInt(1, 4),  DistributionSpec::Bernoulli(0.6),
      DistributionSpec::Categorical({0.2, 0.3, 0.5})};
  for (const auto& spec : specs) {
    RandomStream rng(5, DistributionKindName(spec.kind));
    double sum = 0.0;
    for (int i = 0; i < kDraws; ++i) sum += Sample(spec, rng);
    const double mean = sum / kDraws;
    EXPECT_NEAR(mean, spec.Mean(), 0.03 * std::max(1.0, spec.Mean()))
        << DistributionKindName(spec.kind);
  }
}

TEST(Shuffle, IsAPermutationAndDeterministic) {
  std::vector<int> a(50), b;
  for (int i = 0; i < 50; ++i) a[i] = i;
  b = a;
  RandomStream r1(8, "shuffle"), r2(8, "shuffle");
  Shuffle(a, r1);
  Shuffle(b, r2);
  EXPECT_EQ(a, b);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

}  // namespace
}  // namespace fraudgraph
