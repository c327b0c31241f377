#pragma once

#include <cstdint>
#include <random>

namespace invlab {

// Seedable, splittable random stream. A stream is identified by (seed, stream);
// derive() yields statistically independent child streams from the same seed,
// so concurrent tasks can be given disjoint streams and results stay
// reproducible regardless of scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  RngStream derive(std::uint64_t substream) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0, 1)
  double uniform();
  double normal(double mean = 0.0, double stddev = 1.0);
  std::int64_t binomial(std::int64_t trials, double p);
  // uniform integer in [0, n)
  std::int64_t below(std::int64_t n);

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::mt19937_64 gen_;
};

}  // namespace invlab
