#include "rehf/ellgamma.hpp"

#include <cmath>

namespace rehf {

namespace {

constexpr double kPoleTol = 1e-12;

void check_bases(cplx p, cplx q, const char* who) {
  double ap = std::abs(p), aq = std::abs(q);
  if (ap >= 1.0 || aq >= 1.0 || p == cplx{} || q == cplx{})
    throw domain_error(std::string(who) + ": bases must satisfy 0 < |p|, |q| < 1");
}

// Defining double product, also the reference path for cross-checks.
cplx gamma_double_product(cplx z, cplx a, cplx b, Truncation tr) {
  cplx acc{1.0, 0.0};
  cplx den_row = z;            // z a^j
  cplx num_row = a * b / z;    // a^{j+1} b^{k+1} / z at k = 0
  for (int j = 0; j < tr.max_terms; ++j) {
    if (std::abs(den_row) < tr.tail_threshold && std::abs(num_row) < tr.tail_threshold)
      return acc;
    cplx den_f = den_row;  // z a^j b^k
    cplx num_f = num_row;  // a^{j+1} b^{k+1} / z
    for (int k = 0; k < tr.max_terms; ++k) {
      if (std::abs(den_f) < tr.tail_threshold && std::abs(num_f) < tr.tail_threshold)
        break;
      cplx d = 1.0 - den_f;
      if (std::abs(d) <= kPoleTol * std::max(1.0, std::abs(den_f)))
        throw pole_error("elliptic_gamma: argument within working distance of pole p^{-j} q^{-k}");
      acc *= (1.0 - num_f) / d;
      den_f *= b;
      num_f *= b;
      if (k + 1 == tr.max_terms)
        throw convergence_error("elliptic_gamma: inner product budget exhausted");
    }
    den_row *= a;
    num_row *= a;
    if (j + 1 == tr.max_terms)
      throw convergence_error("elliptic_gamma: outer product budget exhausted");
  }
  return acc;
}

// log Gamma(z; a, b) = sum_{n>=1} (z^n - (ab/z)^n) / (n (1-a^n)(1-b^n)),
// convergent for max(|z|, |ab/z|) < 1. Returned through exp, so the branch
// of the partial sums is immaterial.
cplx gamma_log_series(cplx z, cplx a, cplx b, Truncation tr) {
  cplx w = a * b / z;
  cplx zn = z, wn = w, an = a, bn = b;
  cplx sum{0.0, 0.0};
  double rho = std::max(std::abs(z), std::abs(w));
  for (int n = 1; n <= tr.max_terms; ++n) {
    cplx term = (zn - wn) / (static_cast<double>(n) * (1.0 - an) * (1.0 - bn));
    sum += term;
    double bound = (std::abs(zn) + std::abs(wn)) / static_cast<double>(n);
    if (bound / (1.0 - rho) < tr.tail_threshold) return std::exp(sum);
    zn *= z;
    wn *= w;
    an *= a;
    bn *= b;
  }
  throw convergence_error("elliptic_gamma: log series budget exhausted");
}

cplx gamma_dispatch(cplx z, cplx a, cplx b, const GammaEvalOptions& opts) {
  if (!opts.fast_path) return gamma_double_product(z, a, b, opts.truncation);
  double az = std::abs(z);
  double aab = std::abs(a * b);
  if (std::max(az, aab / az) <= 0.9) return gamma_log_series(z, a, b, opts.truncation);
  // Arguments nearer the inner boundary first reflect through the inversion
  // identity Gamma(z) Gamma(pq/z) = 1, landing at or beyond the outer one.
  double mid = std::sqrt(aab);
  bool invert = az < mid;
  cplx w = invert ? a * b / z : z;
  // Walk inward with the shift equation Gamma(b* w) = theta(w; other) Gamma(w)
  // until the log series converges comfortably.
  cplx shift = std::abs(a) >= std::abs(b) ? a : b;
  cplx other = std::abs(a) >= std::abs(b) ? b : a;
  cplx acc{1.0, 0.0};
  for (int k = 0; k < 200; ++k) {
    double aw = std::abs(w);
    if (std::max(aw, aab / aw) <= 0.75 || aw <= mid) break;
    cplx th = theta(w, other, opts.truncation);
    if (std::abs(th) <= kPoleTol * std::max(1.0, aw))
      throw pole_error("elliptic_gamma: argument within working distance of the pole/zero lattice");
    acc *= th;
    w *= shift;
  }
  double aw = std::abs(w);
  if (std::max(aw, aab / aw) <= 0.9) {
    cplx v = gamma_log_series(w, a, b, opts.truncation) / acc;
    return invert ? 1.0 / v : v;
  }
  // Bases too close to 1 for the walk to land anywhere useful.
  return gamma_double_product(z, a, b, opts.truncation);
}

}  // namespace

cplx elliptic_gamma(cplx z, cplx p, cplx q, GammaEvalOptions opts) {
  check_bases(p, q, "elliptic_gamma");
  if (z == cplx{}) throw domain_error("elliptic_gamma: argument must be nonzero");
  cplx v = gamma_dispatch(z, p, q, opts);
  ensure_finite(v, "elliptic_gamma");
  return v;
}

cplx elliptic_gamma_product(std::span<const cplx> args, cplx p, cplx q, GammaEvalOptions opts) {
  cplx acc{1.0, 0.0};
  for (cplx z : args) acc *= elliptic_gamma(z, p, q, opts);
  return acc;
}

cplx elliptic_gamma_pm(cplx t, cplx z, cplx p, cplx q, GammaEvalOptions opts) {
  return elliptic_gamma(t * z, p, q, opts) * elliptic_gamma(t / z, p, q, opts);
}

cplx elliptic_gamma2(cplx z, cplx p, cplx q, cplx t, GammaEvalOptions opts) {
  check_bases(p, q, "elliptic_gamma2");
  if (std::abs(t) >= 1.0 || t == cplx{})
    throw domain_error("elliptic_gamma2: bases must satisfy 0 < |t| < 1");
  if (z == cplx{}) throw domain_error("elliptic_gamma2: argument must be nonzero");
  const Truncation tr = opts.truncation;
  cplx acc{1.0, 0.0};
  cplx pj = 1.0;
  for (int j = 0; j < tr.max_terms; ++j) {
    cplx zq = z * pj;             // z p^j q^k
    cplx wq = p * q * t * pj / z; // p^{j+1} q^{k+1} t^{l+1} / z
    bool row_live = false;
    for (int k = 0; k < tr.max_terms; ++k) {
      cplx zt = zq, wt = wq;
      bool col_live = false;
      for (int l = 0; l < tr.max_terms; ++l) {
        if (std::abs(zt) < tr.tail_threshold && std::abs(wt) < tr.tail_threshold) break;
        acc *= (1.0 - zt) * (1.0 - wt);
        zt *= t;
        wt *= t;
        col_live = true;
        if (l + 1 == tr.max_terms)
          throw convergence_error("elliptic_gamma2: product budget exhausted");
      }
      if (!col_live) break;
      row_live = true;
      zq *= q;
      wq *= q;
    }
    if (!row_live) break;
    pj *= p;
    if (j + 1 == tr.max_terms)
      throw convergence_error("elliptic_gamma2: product budget exhausted");
  }
  ensure_finite(acc, "elliptic_gamma2");
  return acc;
}

cplx log_gamma_classical(cplx z) {
  // Lanczos approximation, g = 7, 9 terms; reflection below Re z = 1/2.
  static const double c[9] = {
      0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
      771.32342877765313,    -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    double nearest = std::round(z.real());
    if (z.imag() == 0.0 && std::abs(z.real() - nearest) < 1e-13 && nearest <= 0.0)
      throw pole_error("log_gamma_classical: argument at a nonpositive integer");
    // log pi - log sin(pi z) - logGamma(1 - z); the branch of each log term
    // is irrelevant downstream because results are consumed through exp.
    return std::log(M_PI) - std::log(std::sin(M_PI * z)) - log_gamma_classical(1.0 - z);
  }
  cplx zz = z - 1.0;
  cplx x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (zz + static_cast<double>(i));
  cplx t = zz + 7.5;
  return 0.9189385332046727 /* log sqrt(2 pi) */ + (zz + 0.5) * std::log(t) - t + std::log(x);
}

double residue_limit_check(cplx p, cplx q, double h, GammaEvalOptions opts) {
  cplx z = 1.0 - h;
  cplx lhs = (1.0 - z) * elliptic_gamma(z, p, q, opts);
  cplx rhs = 1.0 / (qpochhammer_inf(p, p, opts.truncation) *
                    qpochhammer_inf(q, q, opts.truncation));
  return std::abs(lhs / rhs - 1.0);
}

}  // namespace rehf
