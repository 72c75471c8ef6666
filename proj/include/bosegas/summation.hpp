#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

// Deterministic reductions. Every sum that feeds a reported number goes
// through one of these so results do not depend on accumulation order,
// optimization level, or the number of worker threads.
namespace bosegas {

// Fixed-tree pairwise (cascade) summation: error grows like log2(n) ulps.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& xs) {
  return pairwise_sum(std::span<const double>(xs));
}

// Kahan (compensated) streaming accumulator for sums whose terms are not
// worth materializing.
class KahanAccumulator {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Evaluates eval(i) for i in [0, blocks) on up to `threads` workers. Each
// entry is computed independently by exactly one worker, so the returned
// vector is bit-identical for any thread count.
inline std::vector<double> indexed_block_values(
    std::size_t blocks, unsigned threads,
    const std::function<double(std::size_t)>& eval) {
  std::vector<double> parts(blocks, 0.0);
  if (threads <= 1 || blocks < 2) {
    for (std::size_t i = 0; i < blocks; ++i) parts[i] = eval(i);
  } else {
    const unsigned nw =
        static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
    std::vector<std::thread> workers;
    workers.reserve(nw);
    for (unsigned w = 0; w < nw; ++w) {
      workers.emplace_back([&, w]() {
        for (std::size_t i = w; i < blocks; i += nw) parts[i] = eval(i);
      });
    }
    for (auto& t : workers) t.join();
  }
  return parts;
}

// Evaluates eval(i) for i in [0, blocks) on up to `threads` workers and
// combines the results with the fixed pairwise tree. The partition of work
// is by block index, so the result is bit-identical for any thread count.
inline double indexed_block_sum(std::size_t blocks, unsigned threads,
                                const std::function<double(std::size_t)>& eval) {
  return pairwise_sum(indexed_block_values(blocks, threads, eval));
}

}  // namespace bosegas
