#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace testutil {

using cplx = std::complex<double>;

// Relative deviation, falling back to absolute near zero.
inline double rel(cplx a, cplx b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

inline double relstrict(cplx a, cplx b) { return std::abs(a / b - 1.0); }

}  // namespace testutil
