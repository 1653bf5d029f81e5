#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fraudgraph {

// A labeled deterministic random stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The engine seed is splitmix64(root_seed ^ fnv1a64(label)), so a
// (seed, label) pair always yields the same stream on every platform and
// differently labeled streams are decorrelated. All samplers below consume
// raw 64-bit words only; none of the implementation-defined std::
// distributions are used.
class RandomStream {
 public:
  RandomStream(std::uint64_t root_seed, std::string_view label);

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of precision.
  double NextUniform();

  // Uniform on (0, 1], safe for log().
  double NextOpenUniform() { return 1.0 - NextUniform(); }

  // Derives an independent child stream; equivalent to
  // RandomStream(root_seed, label + "/" + child_label).
  RandomStream Child(std::string_view child_label) const;

  std::uint64_t root_seed() const { return root_seed_; }
  const std::string& label() const { return label_; }

 private:
  std::uint64_t root_seed_;
  std::string label_;
  std::mt19937_64 engine_;
};

std::uint64_t Fnv1a64(std::string_view text);
std::uint64_t SplitMix64(std::uint64_t x);

// Convenience factory mirroring the stream contract.
inline RandomStream MakeStream(std::uint64_t seed, std::string_view label) {
  return RandomStream(seed, label);
}

enum class DistributionKind {
  kGamma,
  kPoisson,
  kLognormal,
  kUniformReal,
  kUniformInt,
  kBernoulli,
  kCategorical,
};

std::string_view DistributionKindName(DistributionKind kind);

// A parameterized distribution. Parameter layout by kind:
//   gamma:        {shape, scale}
//   poisson:      {rate}
//   lognormal:    {mu, sigma}
//   uniform_real: {lower, upper}
//   uniform_int:  {lower, upper}   (inclusive)
//   bernoulli:    {p}
//   categorical:  {w0, w1, ...}    (weights summing to 1)
struct DistributionSpec {
  DistributionKind kind = DistributionKind::kUniformReal;
  std::vector<double> params;

  static DistributionSpec Gamma(double shape, double scale);
  static DistributionSpec Poisson(double rate);
  static DistributionSpec Lognormal(double mu, double sigma);
  static DistributionSpec UniformReal(double lower, double upper);
  static DistributionSpec UniformInt(std::int64_t lower, std::int64_t upper);
  static DistributionSpec Bernoulli(double p);
  static DistributionSpec Categorical(std::vector<double> weights);

  // Throws ConfigError when parameters violate the kind's invariants.
  void Validate() const;

  // Analytic mean.
  double Mean() const;
};

// Draws one value. Integer kinds return integral doubles. Throws
// ConfigError on invalid parameters.
double Sample(const DistributionSpec& spec, RandomStream& rng);

// Direct samplers used by the generators. Preconditions match Validate().
double SampleStandardNormal(RandomStream& rng);
double SampleNormal(RandomStream& rng, double mean, double sd);
double SampleGamma(RandomStream& rng, double shape, double scale);
std::int64_t SamplePoisson(RandomStream& rng, double rate);
double SampleLognormal(RandomStream& rng, double mu, double sigma);
double SampleUniformReal(RandomStream& rng, double lower, double upper);
std::int64_t SampleUniformInt(RandomStream& rng, std::int64_t lower,
                              std::int64_t upper);
bool SampleBernoulli(RandomStream& rng, double p);
std::size_t SampleCategorical(RandomStream& rng, std::span<const double> weights);

// Fisher-Yates shuffle driven by SampleUniformInt.
template <typename T>
void Shuffle(std::vector<T>& values, RandomStream& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(
        SampleUniformInt(rng, 0, static_cast<std::int64_t>(i) - 1));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace fraudgraph
