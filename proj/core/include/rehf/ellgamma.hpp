#pragma once

#include <span>

#include "rehf/qseries.hpp"

namespace rehf {

struct GammaEvalOptions {
  Truncation truncation{};
  // When set, arguments comfortably inside the annulus |pq| < |z| < 1 go
  // through the log series; arguments outside are first moved into it with
  // the shift equations or the inversion identity. Disabled, every call uses
  // the defining double product.
  bool fast_path = true;
};

// Elliptic gamma function
//   Gamma(z; p, q) = prod_{j,k>=0} (1 - p^{j+1} q^{k+1} / z) / (1 - z p^j q^k),
// symmetric in p, q; |p|, |q| < 1, z != 0 and off the pole lattice p^{-j}q^{-k}.
cplx elliptic_gamma(cplx z, cplx p, cplx q, GammaEvalOptions opts = {});

// Product of elliptic gammas over a list of arguments at common bases.
cplx elliptic_gamma_product(std::span<const cplx> args, cplx p, cplx q,
                            GammaEvalOptions opts = {});

// Gamma(t z; p, q) Gamma(t / z; p, q).
cplx elliptic_gamma_pm(cplx t, cplx z, cplx p, cplx q, GammaEvalOptions opts = {});

// Second-order elliptic gamma
//   Gamma(z; p, q, t) = prod_{j,k,l>=0} (1 - z p^j q^k t^l)(1 - p^{j+1} q^{k+1} t^{l+1} / z),
// entire in z on C*.
cplx elliptic_gamma2(cplx z, cplx p, cplx q, cplx t, GammaEvalOptions opts = {});

// log of the classical Euler gamma function, principal-series implementation
// (Lanczos sum with reflection for Re z < 1/2). Accurate to ~1e-13 relative
// in exp(log_gamma_classical) on the strips used by the Mellin-Barnes checks.
cplx log_gamma_classical(cplx z);

// Deviation of (1 - z) Gamma(z; p, q) at z = 1 - h from the exact residue
// value 1 / ((p; p)_inf (q; q)_inf); should shrink linearly with h.
double residue_limit_check(cplx p, cplx q, double h = 1e-6, GammaEvalOptions opts = {});

}  // namespace rehf
