#include "fraudgraph/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "fraudgraph/errors.hpp"

namespace fraudgraph {

std::uint64_t Fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t root_seed, std::string_view label)
    : root_seed_(root_seed),
      label_(label),
      engine_(SplitMix64(root_seed ^ Fnv1a64(label))) {}

double RandomStream::NextUniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

RandomStream RandomStream::Child(std::string_view child_label) const {
  std::string label = label_;
  label += '/';
  label += child_label;
  return RandomStream(root_seed_, label);
}

std::string_view DistributionKindName(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::kGamma: return "gamma";
    case DistributionKind::kPoisson: return "poisson";
    case DistributionKind::kLognormal: return "lognormal";
    case DistributionKind::kUniformReal: return "uniform_real";
    case DistributionKind::kUniformInt: return "uniform_int";
    case DistributionKind::kBernoulli: return "bernoulli";
    case DistributionKind::kCategorical: return "categorical";
  }
  return "unknown";
}

DistributionSpec DistributionSpec::Gamma(double shape, double scale) {
  return {DistributionKind::kGamma, {shape, scale}};
}
DistributionSpec DistributionSpec::Poisson(double rate) {
  return {DistributionKind::kPoisson, {rate}};
}
DistributionSpec DistributionSpec::Lognormal(double mu, double sigma) {
  return {DistributionKind::kLognormal, {mu, sigma}};
}
DistributionSpec DistributionSpec::UniformReal(double lower, double upper) {
  return {DistributionKind::kUniformReal, {lower, upper}};
}
DistributionSpec DistributionSpec::UniformInt(std::int64_t lower,
                                              std::int64_t upper) {
  return {DistributionKind::kUniformInt,
          {static_cast<double>(lower), static_cast<double>(upper)}};
}
DistributionSpec DistributionSpec::Bernoulli(double p) {
  return {DistributionKind::kBernoulli, {p}};
}
DistributionSpec DistributionSpec::Categorical(std::vector<double> weights) {
  return {DistributionKind::kCategorical, std::move(weights)};
}

namespace {

void Require(bool ok, DistributionKind kind, const char* what) {
  if (!ok) {
    throw ConfigError(std::string(DistributionKindName(kind)) + ": " + what);
  }
}

bool AllFinite(const std::vector<double>& values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

void DistributionSpec::Validate() const {
  Require(AllFinite(params), kind, "parameters must be finite");
  switch (kind) {
    case DistributionKind::kGamma:
      Require(params.size() == 2, kind, "expects {shape, scale}");
      Require(params[0] > 0 && params[1] > 0, kind,
              "shape and scale must be > 0");
      break;
    case DistributionKind::kPoisson:
      Require(params.size() == 1, kind, "expects {rate}");
      Require(params[0] > 0, kind, "rate must be > 0");
      break;
    case DistributionKind::kLognormal:
      Require(params.size() == 2, kind, "expects {mu, sigma}");
      Require(params[1] > 0, kind, "sigma must be > 0");
      break;
    case DistributionKind::kUniformReal:
      Require(params.size() == 2, kind, "expects {lower, upper}");
      Require(params[0] <= params[1], kind, "lower must be <= upper");
      break;
    case DistributionKind::kUniformInt:
      Require(params.size() == 2, kind, "expects {lower, upper}");
      Require(params[0] <= params[1], kind, "lower must be <= upper");
      Require(std::floor(params[0]) == params[0] &&
                  std::floor(params[1]) == params[1],
              kind, "bounds must be integers");
      break;
    case DistributionKind::kBernoulli:
      Require(params.size() == 1, kind, "expects {p}");
      Require(params[0] >= 0 && params[0] <= 1, kind, "p must be in [0, 1]");
      break;
    case DistributionKind::kCategorical: {
      Require(!params.empty(), kind, "needs at least one weight");
      for (double w : params) Require(w >= 0, kind, "weights must be >= 0");
      double total = std::accumulate(params.begin(), params.end(), 0.0);
      Require(std::abs(total - 1.0) <= 1e-9, kind,
              "weights must sum to 1 within 1e-9");
      break;
    }
  }
}

double DistributionSpec::Mean() const {
  Validate();
  switch (kind) {
    case DistributionKind::kGamma: return params[0] * params[1];
    case DistributionKind::kPoisson: return params[0];
    case DistributionKind::kLognormal:
      return std::exp(params[0] + 0.5 * params[1] * params[1]);
    case DistributionKind::kUniformReal:
    case DistributionKind::kUniformInt:
      return 0.5 * (params[0] + params[1]);
    case DistributionKind::kBernoulli: return params[0];
    case DistributionKind::kCategorical: {
      double mean = 0.0;
      for (std::size_t i = 0; i < params.size(); ++i) {
        mean += static_cast<double>(i) * params[i];
      }
      return mean;
    }
  }
  return 0.0;
}

double Sample(const DistributionSpec& spec, RandomStream& rng) {
  spec.Validate();
  const auto& p = spec.params;
  switch (spec.kind) {
    case DistributionKind::kGamma: return SampleGamma(rng, p[0], p[1]);
    case DistributionKind::kPoisson:
      return static_cast<double>(SamplePoisson(rng, p[0]));
    case DistributionKind::kLognormal: return SampleLognormal(rng, p[0], p[1]);
    case DistributionKind::kUniformReal:
      return SampleUniformReal(rng, p[0], p[1]);
    case DistributionKind::kUniformInt:
      return static_cast<double>(SampleUniformInt(
          rng, static_cast<std::int64_t>(p[0]),
          static_cast<std::int64_t>(p[1])));
    case DistributionKind::kBernoulli:
      return SampleBernoulli(rng, p[0]) ? 1.0 : 0.0;
    case DistributionKind::kCategorical:
      return static_cast<double>(SampleCategorical(rng, p));
  }
  return 0.0;
}

// Box-Muller, one output per call so that the stream position depends only
// on the number of draws.
double SampleStandardNormal(RandomStream& rng) {
  const double u1 = rng.NextOpenUniform();
  const double u2 = rng.NextUniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double SampleNormal(RandomStream& rng, double mean, double sd) {
  return mean + sd * SampleStandardNormal(rng);
}

// Marsaglia-Tsang; shapes below 1 use the u^(1/shape) boost.
double SampleGamma(RandomStream& rng, double shape, double scale) {
  if (shape < 1.0) {
    const double u = rng.NextOpenUniform();
    return SampleGamma(rng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x;
    double v;
    do {
      x = SampleStandardNormal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.NextOpenUniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return d * v * scale;
    }
  }
}

// Multiplication method for small rates, Hormann's PTRS otherwise.
std::int64_t SamplePoisson(RandomStream& rng, double rate) {
  if (rate < 30.0) {
    const double limit = std::exp(-rate);
    std::int64_t k = 0;
    double product = rng.NextUniform();
    while (product > limit) {
      ++k;
      product *= rng.NextUniform();
    }
    return k;
  }
  const double slam = std::sqrt(rate);
  const double loglam = std::log(rate);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = rng.NextUniform() - 0.5;
    const double v = rng.NextUniform();
    const double us = 0.5 - std::abs(u);
    const auto k = static_cast<std::int64_t>(
        std::floor((2.0 * a / us + b) * u + rate + 0.43));
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -rate + static_cast<double>(k) * loglam -
            std::lgamma(static_cast<double>(k) + 1.0)) {
      return k;
    }
  }
}

double SampleLognormal(RandomStream& rng, double mu, double sigma) {
  return std::exp(SampleNormal(rng, mu, sigma));
}

double SampleUniformReal(RandomStream& rng, double lower, double upper) {
  if (lower == upper) return lower;
  return lower + (upper - lower) * rng.NextUniform();
}

std::int64_t SampleUniformInt(RandomStream& rng, std::int64_t lower,
                              std::int64_t upper) {
  const std::uint64_t range =
      static_cast<std::uint64_t>(upper) - static_cast<std::uint64_t>(lower) + 1;
  if (range == 0) return static_cast<std::int64_t>(rng.NextU64());
  // Reject the low band so that x % range is unbiased.
  const std::uint64_t threshold = (0 - range) % range;
  std::uint64_t x;
  do {
    x = rng.NextU64();
  } while (x < threshold);
  return lower + static_cast<std::int64_t>(x % range);
}

bool SampleBernoulli(RandomStream& rng, double p) {
  return rng.NextUniform() < p;
}

std::size_t SampleCategorical(RandomStream& rng,
                              std::span<const double> weights) {
  const double u = rng.NextUniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (u < cumulative) return i;
  }
  // Rounding residue: land on the last non-zero weight.
  for (std::size_t i = weights.size(); i > 0; --i) {
    if (weights[i - 1] > 0) return i - 1;
  }
  return 0;
}

}  // namespace fraudgraph
