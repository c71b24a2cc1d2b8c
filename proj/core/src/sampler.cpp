#include "rehf/verify.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace rehf {

namespace {

// dependent |t| acceptance window for plain draws; the draw_window overloads
// use their own annulus for the dependent entry too
constexpr double kLastMagFloor = 0.01;

}  // namespace

ParamSampler::ParamSampler(const SamplerConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

double ParamSampler::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng_);
}

long ParamSampler::uniform_int(long lo, long hi) {
  std::uniform_int_distribution<long> dist(lo, hi);
  return dist(rng_);
}

cplx ParamSampler::annulus(double lo, double hi) {
  double mag = uniform(lo, hi);
  double phase = uniform(-std::numbers::pi, std::numbers::pi);
  return std::polar(mag, phase);
}

Bases ParamSampler::bases(int r) {
  cplx p = std::polar(uniform(cfg_.p_mag_lo, cfg_.p_mag_hi),
                      uniform(-cfg_.phase_cap, cfg_.phase_cap));
  cplx q = std::polar(uniform(cfg_.q_mag_lo, cfg_.q_mag_hi),
                      uniform(-cfg_.phase_cap, cfg_.phase_cap));
  return Bases(p, q, r);
}

namespace {

struct FillSpec {
  std::size_t count = 0;
  cplx t_product{1.0, 0.0};
  long n_sum = 0;
};

}  // namespace

// Draws count-1 free parameters in the annulus, sets the last from the product
// constraint, and resamples until the dependent magnitude lands in
// [last_lo, last_hi]. Discrete labels use [-n_cap, n_cap] with the last fixed
// by the sum constraint.
static void fill_balanced(ParamSampler& s, std::vector<cplx>& t, std::vector<long>& n,
                          const FillSpec& fs, double lo, double hi, double last_lo,
                          double last_hi, long n_cap, int resample_limit) {
  t.resize(fs.count);
  n.resize(fs.count);
  for (int attempt = 0; attempt < resample_limit; ++attempt) {
    cplx prod = 1.0;
    for (std::size_t a = 0; a + 1 < fs.count; ++a) {
      t[a] = s.annulus(lo, hi);
      prod *= t[a];
    }
    t[fs.count - 1] = fs.t_product / prod;
    double mag = std::abs(t[fs.count - 1]);
    if (mag < last_lo || mag > last_hi) continue;
    long acc = 0;
    for (std::size_t a = 0; a + 1 < fs.count; ++a) {
      n[a] = s.uniform_int(-n_cap, n_cap);
      acc += n[a];
    }
    n[fs.count - 1] = fs.n_sum - acc;
    if (std::labs(n[fs.count - 1]) > 3 * n_cap + 4) continue;
    return;
  }
  throw convergence_error("ParamSampler: resample limit exhausted");
}

BalancedParams ParamSampler::draw(ParamKind kind, int rank, const Bases& b, long eps) {
  return draw_impl(kind, rank, b, eps, cfg_.t_mag_lo, cfg_.t_mag_cap, kLastMagFloor,
                   cfg_.t_mag_cap, false);
}

BalancedParams ParamSampler::draw_window(ParamKind kind, int rank, const Bases& b,
                                         long eps, double t_lo, double t_hi) {
  return draw_impl(kind, rank, b, eps, t_lo, t_hi, t_lo, t_hi, false);
}

BalancedParams ParamSampler::draw_balanced(ParamKind kind, int rank, const Bases& b,
                                           long eps, double spread_lo, double spread_hi) {
  return draw_impl(kind, rank, b, eps, spread_lo, spread_hi, spread_lo, spread_hi, true);
}

BalancedParams ParamSampler::draw_impl(ParamKind kind, int rank, const Bases& b, long eps,
                                       double t_lo, double t_hi, double last_lo,
                                       double last_hi, bool relative) {
  long n_cap = cfg_.n_abs_cap >= 0 ? cfg_.n_abs_cap : b.r - 1;
  BalancedParams P;
  P.kind = kind;
  P.rank = rank;
  P.eps = eps;
  FillSpec fs;
  switch (kind) {
    case ParamKind::Beta6:
      fs = {6, b.pq, -3 * eps};
      break;
    case ParamKind::V8:
      fs = {8, b.pq * b.pq, -4 * eps};
      break;
    case ParamKind::TypeI_Cn:
      fs = {static_cast<std::size_t>(2 * rank + 4), b.pq, -(rank + 2) * eps};
      break;
    case ParamKind::TypeII_Cn:
    case ParamKind::TypeII_Cd_V: {
      P.t_cross = annulus(0.30, 0.55);
      P.n_cross = uniform_int(-n_cap, n_cap);
      cplx base = kind == ParamKind::TypeII_Cn ? b.pq : b.pq * b.pq;
      long sum0 = kind == ParamKind::TypeII_Cn ? -3 * eps : -4 * eps;
      std::size_t count = kind == ParamKind::TypeII_Cn ? 6 : 8;
      fs = {count, base / ipow(P.t_cross, 2 * rank - 2),
            sum0 - 2 * P.n_cross * (rank - 1)};
      break;
    }
    case ParamKind::TypeI_Cd_general: {
      if (relative) {
        double w = std::pow(std::abs(ipow(b.pq, 2)),
                            1.0 / static_cast<double>(2 * rank + 6));
        return draw_general_I(rank, 1, b, eps, t_lo * w, t_hi * w);
      }
      return draw_general_I(rank, 1, b, eps, t_lo, t_hi);
    }
    case ParamKind::TypeI_An: {
      if (relative) {
        double w = std::pow(std::abs(ipow(b.pq, 2)),
                            1.0 / static_cast<double>(2 * (rank + 3)));
        return draw_An(rank, 1, b, eps, t_lo * w, t_hi * w);
      }
      return draw_An(rank, 1, b, eps);
    }
  }
  if (relative) {
    double w = std::pow(std::abs(fs.t_product), 1.0 / static_cast<double>(fs.count));
    t_lo *= w;
    t_hi *= w;
    last_lo *= w;
    last_hi *= w;
  }
  fill_balanced(*this, P.t, P.n, fs, t_lo, t_hi, last_lo, last_hi, n_cap,
                cfg_.resample_limit);
  P.validate(b);
  return P;
}

BalancedParams ParamSampler::draw_general_I(int rank, int m_power, const Bases& b,
                                            long eps, double t_lo, double t_hi) {
  long n_cap = cfg_.n_abs_cap >= 0 ? cfg_.n_abs_cap : b.r - 1;
  BalancedParams P;
  P.kind = ParamKind::TypeI_Cd_general;
  P.rank = rank;
  P.eps = eps;
  FillSpec fs{static_cast<std::size_t>(2 * rank + 2 * m_power + 4),
              ipow(b.pq, m_power + 1), -(rank + m_power + 2) * eps};
  fill_balanced(*this, P.t, P.n, fs, t_lo, t_hi, t_lo, t_hi, n_cap, cfg_.resample_limit);
  P.validate(b);
  return P;
}

BalancedParams ParamSampler::draw_An(int rank, int m_power, const Bases& b, long eps) {
  return an_impl(rank, m_power, b, eps, cfg_.t_mag_lo, cfg_.t_mag_cap, kLastMagFloor,
                 cfg_.t_mag_cap);
}

BalancedParams ParamSampler::draw_An(int rank, int m_power, const Bases& b, long eps,
                                     double t_lo, double t_hi) {
  return an_impl(rank, m_power, b, eps, t_lo, t_hi, t_lo, t_hi);
}

BalancedParams ParamSampler::an_impl(int rank, int m_power, const Bases& b, long eps,
                                     double t_lo, double t_hi, double last_lo,
                                     double last_hi) {
  long n_cap = cfg_.n_abs_cap >= 0 ? cfg_.n_abs_cap : b.r - 1;
  std::size_t fam = static_cast<std::size_t>(rank + m_power + 2);
  BalancedParams P;
  P.kind = ParamKind::TypeI_An;
  P.rank = rank;
  P.eps = eps;
  for (int attempt = 0; attempt < cfg_.resample_limit; ++attempt) {
    P.t.resize(fam);
    P.s.resize(fam);
    P.n.resize(fam);
    P.k.resize(fam);
    cplx prod = 1.0;
    for (std::size_t a = 0; a < fam; ++a) {
      P.t[a] = annulus(t_lo, t_hi);
      prod *= P.t[a];
    }
    for (std::size_t a = 0; a + 1 < fam; ++a) {
      P.s[a] = annulus(t_lo, t_hi);
      prod *= P.s[a];
    }
    P.s[fam - 1] = ipow(b.pq, m_power + 1) / prod;
    double mag = std::abs(P.s[fam - 1]);
    if (mag < last_lo || mag > last_hi) continue;
    long acc = 0;
    for (std::size_t a = 0; a < fam; ++a) {
      P.n[a] = uniform_int(-n_cap, n_cap);
      acc += P.n[a];
    }
    for (std::size_t a = 0; a + 1 < fam; ++a) {
      P.k[a] = uniform_int(-n_cap, n_cap);
      acc += P.k[a];
    }
    P.k[fam - 1] = -acc;
    if (std::labs(P.k[fam - 1]) > 3 * n_cap + 4) continue;
    P.validate(b);
    return P;
  }
  throw convergence_error("ParamSampler: resample limit exhausted");
}

}  // namespace rehf
