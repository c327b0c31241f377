#include "invlab/rng.hpp"

namespace invlab {

namespace {

// splitmix64, used only to spread (seed, stream) into mt19937_64 init material.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  std::seed_seq seq{mix(seed), mix(mix(seed) ^ mix(stream)), mix(stream ^ 0xa5a5a5a5a5a5a5a5ULL)};
  gen_.seed(seq);
}

RngStream RngStream::derive(std::uint64_t substream) const {
  return RngStream(seed_, mix(stream_ ^ mix(substream + 1)));
}

double RngStream::uniform() {
  // 53-bit mantissa, uniform in [0,1)
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::normal(double mean, double stddev) {
  std::normal_distribution<double> dist(mean, stddev);
  return dist(gen_);
}

std::int64_t RngStream::binomial(std::int64_t trials, double p) {
  if (trials <= 0) return 0;
  if (p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::int64_t> dist(trials, p);
  return dist(gen_);
}

std::int64_t RngStream::below(std::int64_t n) {
  std::uniform_int_distribution<std::int64_t> dist(0, n - 1);
  return dist(gen_);
}

}  // namespace invlab
