#pragma once

#include <cstddef>
#include <vector>

namespace griffith::reduce {

// Deterministic blocked reduction. The index range is cut into fixed-size
// blocks; each block is summed left to right, block partials are then
// accumulated in block order. The association is independent of the number
// of threads, so results are bit-identical across runs and thread counts.
inline constexpr std::size_t kBlock = 512;

template <class Term>
double blocked_sum(std::size_t n, Term&& term) {
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static) if (nblocks > 4)
  for (long long jb = 0; jb < static_cast<long long>(nblocks); ++jb) {
    const std::size_t lo = static_cast<std::size_t>(jb) * kBlock;
    const std::size_t hi = (lo + kBlock < n) ? lo + kBlock : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(jb)] = s;
  }
  double total = 0.0;
  for (std::size_t jb = 0; jb < nblocks; ++jb) total += partial[jb];
  return total;
}

namespace serial {

// Plain left-to-right reference sum, kept for cross-checking the blocked
// kernel in tests and benchmarks.
template <class Term>
double plain_sum(std::size_t n, Term&& term) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += term(i);
  return s;
}

}  // namespace serial

}  // namespace griffith::reduce
