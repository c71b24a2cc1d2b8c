#pragma once

#include <span>

#include "rehf/common.hpp"

namespace rehf {

// Truncation policy shared by all q-product / q-series evaluations: stop when
// the running factor magnitude falls below tail_threshold, fail if max_terms
// is exhausted first.
struct Truncation {
  double tail_threshold = 1e-17;
  int max_terms = 400;
};

// (z; p)_inf = prod_{j>=0} (1 - z p^j), |p| < 1.
cplx qpochhammer_inf(cplx z, cplx p, Truncation tr = {});

// theta(z; p) = (z; p)_inf (p/z; p)_inf, |p| < 1, z != 0.
cplx theta(cplx z, cplx p, Truncation tr = {});

// Product of theta(arg; p) over all arguments (empty product = 1).
cplx theta_product(std::span<const cplx> args, cplx p, Truncation tr = {});

// theta(t x; p) theta(t / x; p), the +- argument pair convention.
cplx theta_pm(cplx t, cplx x, cplx p, Truncation tr = {});

// Two-sided elliptic shifted factorial:
//   n > 0: prod_{j=0}^{n-1} theta(x q^j; p)
//   n = 0: 1
//   n < 0: prod_{j=1}^{-n} theta(x q^{-j}; p)^{-1}
// Throws pole_error when a denominator theta vanishes to working precision.
cplx elliptic_pochhammer(cplx x, long n, cplx p, cplx q, Truncation tr = {});

}  // namespace rehf
