#pragma once

#include <utility>

#include "rehf/bases.hpp"
#include "rehf/ellgamma.hpp"

namespace rehf {

// Lens gamma function: Gamma(z p^m; p^r, pq) * Gamma(z q^{r-m}; q^r, pq),
// defined for nonzero z and any integer m.
cplx gamma_lens(cplx z, long m, const Bases& b, GammaEvalOptions opts = {});

// Normalized rarefied gamma function:
//   (-z / sqrt(pq))^{m(m-1)/2} (p/q)^{m(m-1)(2m-1)/12} * gamma_lens(z, m).
// The second exponent is realized as the integer power m(m-1)(2m-1)/6 of the
// cached sqrt(p/q), so no fractional power is ever taken at call time.
cplx gamma_rarefied(cplx z, long m, const Bases& b, GammaEvalOptions opts = {});

// Equivalent product form of gamma_rarefied for 0 <= m <= r, built from
// elliptic gammas with bases p^r and q^r only:
//   (-z)^{m(m-1)/2} p^{m(m-1)(m-2)/6} q^{-m(m^2-1)/6}
//     * prod_{k<m} Gamma(q^{r-m} z (pq)^k; p^r, q^r)
//     * prod_{k<r-m} Gamma(p^m z (pq)^k; p^r, q^r).
// Exercises a numerically independent evaluation path.
cplx gamma_rarefied_factored(cplx z, long m, const Bases& b,
                             GammaEvalOptions opts = {});

// Closed-form ratio gamma_rarefied(z, m + k r) / gamma_rarefied(z, m).
cplx quasiperiod_factor(cplx z, long m, long k, const Bases& b);

// Closed-form ratio gamma_lens(z, m + k r) / gamma_lens(z, m).
cplx quasiperiod_factor_lens(cplx z, long m, long k, const Bases& b);

// Relative residuals of the two first-order shift equations
//   Gamma(qz, m+1) = (-z)^m  p^{m(m-1)/2} theta(z p^m;  p^r) Gamma(z, m)
//   Gamma(pz, m-1) = (-z)^-m q^{m(m+1)/2} theta(z q^-m; q^r) Gamma(z, m)
// returned as (lhs/rhs - 1) for each.
std::pair<cplx, cplx> recurrence_check(cplx z, long m, const Bases& b,
                                       GammaEvalOptions opts = {});

// (1 - z) * gamma_rarefied(z, 0) at z = 1 - h; approaches
// 1 / ((p^r; p^r)_inf (q^r; q^r)_inf) as h -> 0, with O(h) deviation.
cplx residue_limit_rarefied(const Bases& b, double h = 1e-6,
                            GammaEvalOptions opts = {});

// Leading p -> 0 form of gamma_lens(z, m; p, q) for -r < m <= r, evaluated
// at the given small p. Out-of-range m must be reduced first through
// quasiperiod_factor_lens.
cplx small_p_asymptotic(cplx z, long m, cplx p, cplx q, int r,
                        Truncation tr = {});

// 1 / (gamma_rarefied(z, m) * gamma_rarefied(1/z, -m)) in closed theta form:
//   (pq)^{m(m+1)/2} theta(z q^{-m}; q^r) theta(z^{-1} p^{-m}; p^r).
// Entire in z, so kernel denominators built from it never divide by a pole.
cplx gamma_pair_inv(cplx z, long m, const Bases& b, Truncation tr = {});

}  // namespace rehf
