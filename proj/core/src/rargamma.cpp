#include "rehf/rargamma.hpp"

#include <cmath>

namespace rehf {

namespace {

// Integer power that stays finite for exponents far beyond what repeated
// multiplication tolerates. For integer n the log form is branch-free:
// exp(n log w) is independent of which branch of log w is taken.
cplx monomial_pow(cplx w, long long n) {
  if (n == 0) return cplx{1.0, 0.0};
  if (std::llabs(n) <= 60) return ipow(w, n);
  return std::exp(static_cast<double>(n) * std::log(w));
}

long long div_exact(long long num, long long den) {
  return num / den;  // callers pass numerators provably divisible by den
}

}  // namespace

cplx gamma_lens(cplx z, long m, const Bases& b, GammaEvalOptions opts) {
  if (z == cplx{}) throw domain_error("gamma_lens: z must be nonzero");
  cplx f1, f2;
  try {
    f1 = elliptic_gamma(z * ipow(b.p, m), b.p_r, b.pq, opts);
  } catch (const pole_error&) {
    throw pole_error("gamma_lens: z within working distance of the pole family p^{-m-j-rk} q^{-j}");
  }
  try {
    f2 = elliptic_gamma(z * ipow(b.q, b.r - m), b.q_r, b.pq, opts);
  } catch (const pole_error&) {
    throw pole_error("gamma_lens: z within working distance of the pole family p^{-j} q^{m-r-j-rk}");
  }
  return f1 * f2;
}

cplx gamma_rarefied(cplx z, long m, const Bases& b, GammaEvalOptions opts) {
  // at r = 1 the discrete variable drops out entirely
  if (b.r == 1) return elliptic_gamma(z, b.p, b.q, opts);
  long long mm = m;
  cplx pref = monomial_pow(-z / b.sqrt_pq, mm * (mm - 1) / 2) *
              monomial_pow(b.sqrt_p_over_q, div_exact(mm * (mm - 1) * (2 * mm - 1), 6));
  return pref * gamma_lens(z, m, b, opts);
}

cplx gamma_rarefied_factored(cplx z, long m, const Bases& b, GammaEvalOptions opts) {
  if (m < 0 || m > b.r)
    throw domain_error("gamma_rarefied_factored: valid for 0 <= m <= r only");
  long long mm = m;
  cplx pref = monomial_pow(-z, mm * (mm - 1) / 2) *
              monomial_pow(b.p, div_exact(mm * (mm - 1) * (mm - 2), 6)) *
              monomial_pow(b.q, -div_exact(mm * (mm - 1) * (mm + 1), 6));
  cplx acc = pref;
  cplx w = z * ipow(b.q, b.r - m);
  for (long k = 0; k < m; ++k) {
    acc *= elliptic_gamma(w, b.p_r, b.q_r, opts);
    w *= b.pq;
  }
  w = z * ipow(b.p, m);
  for (long k = 0; k < b.r - m; ++k) {
    acc *= elliptic_gamma(w, b.p_r, b.q_r, opts);
    w *= b.pq;
  }
  return acc;
}

cplx quasiperiod_factor(cplx z, long m, long k, const Bases& b) {
  if (z == cplx{}) throw domain_error("quasiperiod_factor: z must be nonzero");
  long long mm = m, kk = k, rr = b.r;
  // Exponents of (-z/sqrt(pq)) and sqrt(p/q); both are integers because
  // r(r-1)/2 is integral and r(r-1)k(2rk^2-1) is divisible by 6.
  long long a_exp = mm * kk * (rr - 1) + (rr * (rr - 1) / 2) * kk * kk;
  long long b_exp = mm * (mm + rr * kk) * kk * (rr - 1) +
                    div_exact(rr * (rr - 1) * kk * (2 * rr * kk * kk - 1), 6);
  return monomial_pow(-z / b.sqrt_pq, a_exp) * monomial_pow(b.sqrt_p_over_q, b_exp);
}

cplx quasiperiod_factor_lens(cplx z, long m, long k, const Bases& b) {
  if (z == cplx{}) throw domain_error("quasiperiod_factor_lens: z must be nonzero");
  long long mm = m, kk = k, rr = b.r;
  long long a_exp = mm * kk + rr * (kk * (kk - 1) / 2);
  long long b_exp = kk * mm * mm + kk * mm * rr * (kk - 1) +
                    rr * rr * div_exact(kk * (kk - 1) * (2 * kk - 1), 6);
  return monomial_pow(-b.sqrt_pq / z, a_exp) * monomial_pow(b.sqrt_q_over_p, b_exp);
}

std::pair<cplx, cplx> recurrence_check(cplx z, long m, const Bases& b,
                                       GammaEvalOptions opts) {
  long long mm = m;
  cplx g = gamma_rarefied(z, m, b, opts);
  cplx lhs_q = gamma_rarefied(b.q * z, m + 1, b, opts);
  cplx rhs_q = monomial_pow(-z, mm) * monomial_pow(b.p, mm * (mm - 1) / 2) *
               theta(z * ipow(b.p, m), b.p_r, opts.truncation) * g;
  cplx lhs_p = gamma_rarefied(b.p * z, m - 1, b, opts);
  cplx rhs_p = monomial_pow(-z, -mm) * monomial_pow(b.q, mm * (mm + 1) / 2) *
               theta(z * ipow(b.q, -m), b.q_r, opts.truncation) * g;
  return {lhs_q / rhs_q - 1.0, lhs_p / rhs_p - 1.0};
}

cplx residue_limit_rarefied(const Bases& b, double h, GammaEvalOptions opts) {
  cplx z = 1.0 - h;
  return (1.0 - z) * gamma_rarefied(z, 0, b, opts);
}

cplx small_p_asymptotic(cplx z, long m, cplx p, cplx q, int r, Truncation tr) {
  if (m <= -r || m > r)
    throw domain_error(
        "small_p_asymptotic: need -r < m <= r; reduce m with quasiperiod_factor_lens first");
  cplx qr = ipow(q, r);
  if (m > 0) return 1.0 / qpochhammer_inf(z * ipow(q, r - m), qr, tr);
  if (m == 0) return 1.0 / qpochhammer_inf(z, qr, tr);
  long long a = -m;
  cplx pref = ipow(-p / z, a) * ipow(p / q, a * (a - 1) / 2);
  return pref / qpochhammer_inf(z * ipow(q, a), qr, tr);
}

cplx gamma_pair_inv(cplx z, long m, const Bases& b, Truncation tr) {
  if (z == cplx{}) throw domain_error("gamma_pair_inv: z must be nonzero");
  long long mm = m;
  return monomial_pow(b.pq, mm * (mm + 1) / 2) *
         theta(z * ipow(b.q, -m), b.q_r, tr) *
         theta(ipow(b.p, -m) / z, b.p_r, tr);
}

}  // namespace rehf
