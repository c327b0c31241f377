#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace invlab {

// Runs fn(index) for index in [0, count) across up to `threads` workers
// (0 = hardware concurrency). Work is striped by index, so as long as fn
// writes only to slot `index` of its output, results do not depend on
// scheduling.
inline void parallel_for(long long count, int threads, const std::function<void(long long)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || count <= 1) {
    for (long long k = 0; k < count; ++k) fn(k);
    return;
  }
  const int workers = static_cast<int>(std::min<long long>(threads, count));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (long long k = w; k < count; k += workers) fn(k);
    });
  }
  for (auto& t : pool) t.join();
}

// Kahan compensated sum; used where aggregation must be scheduling-invariant.
class CompensatedSum {
 public:
  void add(double x) {
    const double y = x - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace invlab
