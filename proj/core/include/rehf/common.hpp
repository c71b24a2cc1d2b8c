#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rehf/errors.hpp"

namespace rehf {

using cplx = std::complex<double>;

inline bool is_finite(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void ensure_finite(cplx z, const char* what) {
  if (!is_finite(z)) throw convergence_error(std::string(what) + ": non-finite value");
}

// Principal square root: nonnegative real part, positive imaginary part on
// the negative real axis. std::sqrt already implements this branch; the named
// wrapper exists because branch choices matter enough here to be explicit.
inline cplx principal_sqrt(cplx z) { return std::sqrt(z); }

// z^n for integer n by binary exponentiation. Exact branch-free power: for
// integer exponents all branches of the log agree.
inline cplx ipow(cplx z, long long n) {
  if (n == 0) return {1.0, 0.0};
  bool inv = n < 0;
  unsigned long long e = inv ? static_cast<unsigned long long>(-(n + 1)) + 1ull
                             : static_cast<unsigned long long>(n);
  cplx base = z, acc = {1.0, 0.0};
  while (e != 0) {
    if (e & 1ull) acc *= base;
    base *= base;
    e >>= 1;
  }
  return inv ? 1.0 / acc : acc;
}

// Fixed-shape pairwise summation. The reduction tree depends only on the
// length, so results are bitwise reproducible regardless of thread count.
cplx pairwise_sum(std::span<const cplx> xs);
double pairwise_sum(std::span<const double> xs);

// Runs block_fn(lo, hi) over [0, n) split into fixed-size blocks across at
// most `jobs` threads (0 = default_jobs()). Block boundaries do not depend on
// the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& block_fn,
                  int jobs = 0);

// Process-wide default for --jobs style settings (0 = hardware concurrency).
int default_jobs();
void set_default_jobs(int jobs);

}  // namespace rehf
