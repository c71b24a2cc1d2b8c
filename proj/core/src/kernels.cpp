#include "rehf/kernels.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "rehf/errors.hpp"
#include "rehf/qseries.hpp"

namespace rehf {

namespace {

void require_balance(bool ok, const std::string& msg) {
  if (!ok) throw balance_error(msg);
}

cplx product_of(std::span<const cplx> xs) {
  cplx acc{1.0, 0.0};
  for (cplx x : xs) acc *= x;
  return acc;
}

long sum_of(std::span<const long> xs) {
  long acc = 0;
  for (long x : xs) acc += x;
  return acc;
}

void check_product(cplx actual, cplx expected, const char* what) {
  double scale = std::max(1.0, std::abs(expected));
  if (std::abs(actual - expected) > 1e-12 * scale) {
    std::ostringstream os;
    os << what << ": parameter product off by " << std::abs(actual - expected) / scale;
    throw balance_error(os.str());
  }
}

void check_window(std::span<const cplx> ts, const char* what) {
  for (cplx v : ts) {
    double a = std::abs(v);
    if (!(a > 0.0) || a >= 1.0) {
      std::ostringstream os;
      os << what << ": parameter magnitude " << a << " outside (0, 1)";
      throw balance_error(os.str());
    }
  }
}

// Routes gamma evaluations through the cache when one is attached.
struct GammaSource {
  const Bases& b;
  const GammaGridCache* cache;

  cplx operator()(cplx arg, long k) const {
    if (cache != nullptr) return (*cache)(arg, k);
    return gamma_rarefied(arg, k, b);
  }
};

}  // namespace

const char* to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::Beta6: return "Beta6";
    case ParamKind::TypeI_Cn: return "TypeI_Cn";
    case ParamKind::TypeII_Cn: return "TypeII_Cn";
    case ParamKind::V8: return "V8";
    case ParamKind::TypeII_Cd_V: return "TypeII_Cd_V";
    case ParamKind::TypeI_Cd_general: return "TypeI_Cd_general";
    case ParamKind::TypeI_An: return "TypeI_An";
  }
  return "unknown";
}

void BalancedParams::validate(const Bases& b) const {
  require_balance(rank >= 1, "BalancedParams: rank must be positive");
  require_balance(t.size() == n.size(),
                  "BalancedParams: t and n lengths differ");
  check_window(t, to_string(kind));
  const cplx pq = b.pq;
  const long m_count = static_cast<long>(t.size());

  switch (kind) {
    case ParamKind::Beta6:
      require_balance(m_count == 6 && rank == 1, "Beta6: needs 6 parameters at rank 1");
      require_balance(eps == 0 || eps == 1, "Beta6: eps must be 0 or 1");
      check_product(product_of(t), pq, "Beta6");
      require_balance(sum_of(n) + 3 * eps == 0, "Beta6: index sum violated");
      break;
    case ParamKind::TypeI_Cn:
      require_balance(m_count >= 6 && m_count % 2 == 0 && rank == (m_count - 4) / 2,
                      "TypeI_Cn: needs 2n+4 parameters at rank n");
      require_balance(eps == 0 || eps == 1, "TypeI_Cn: eps must be 0 or 1");
      check_product(product_of(t), pq, "TypeI_Cn");
      require_balance(sum_of(n) + (rank + 2) * eps == 0, "TypeI_Cn: index sum violated");
      break;
    case ParamKind::V8:
      require_balance(m_count == 8 && rank == 1, "V8: needs 8 parameters at rank 1");
      require_balance(eps == 0 || eps == 1, "V8: eps must be 0 or 1");
      check_product(product_of(t), pq * pq, "V8");
      require_balance(sum_of(n) + 4 * eps == 0, "V8: index sum violated");
      break;
    case ParamKind::TypeII_Cn:
    case ParamKind::TypeII_Cd_V: {
      const bool six = kind == ParamKind::TypeII_Cn;
      require_balance(m_count == (six ? 6 : 8), "type II: wrong parameter count");
      require_balance(eps == 0 || eps == 1, "type II: eps must be 0 or 1");
      check_window(std::span<const cplx>(&t_cross, 1), to_string(kind));
      const cplx target = six ? pq : pq * pq;
      check_product(ipow(t_cross, 2 * rank - 2) * product_of(t), target, to_string(kind));
      const long target_sum = six ? 3 * eps : 4 * eps;
      require_balance(2 * n_cross * (rank - 1) + sum_of(n) + target_sum == 0,
                      "type II: index sum violated");
      break;
    }
    case ParamKind::TypeI_Cd_general: {
      require_balance(m_count % 2 == 0 && m_count >= 2 * rank + 4,
                      "TypeI_Cd_general: needs 2d+2m+4 parameters");
      require_balance(eps == 0 || eps == 1, "TypeI_Cd_general: eps must be 0 or 1");
      const long power = m_count / 2 - rank - 1;
      check_product(product_of(t), ipow(pq, power), "TypeI_Cd_general");
      require_balance(sum_of(n) + (m_count / 2) * eps == 0,
                      "TypeI_Cd_general: index sum violated");
      break;
    }
    case ParamKind::TypeI_An: {
      require_balance(s.size() == t.size() && k.size() == t.size(),
                      "TypeI_An: second family must match the first in length");
      require_balance(m_count >= rank + 2, "TypeI_An: needs n+m+2 parameters");
      require_balance(0 <= eps && eps <= rank, "TypeI_An: eps out of range");
      check_window(s, "TypeI_An");
      const long power = m_count - rank - 1;
      check_product(product_of(t) * product_of(s), ipow(pq, power), "TypeI_An");
      require_balance(sum_of(n) + sum_of(k) == 0, "TypeI_An: index sum violated");
      break;
    }
  }
}

GammaGridCache::GammaGridCache(const Bases& b, GammaEvalOptions opts)
    : bases_(&b), opts_(opts) {}

GammaGridCache::Key GammaGridCache::make_key(cplx arg, long k) {
  double re = arg.real() == 0.0 ? 0.0 : arg.real();
  double im = arg.imag() == 0.0 ? 0.0 : arg.imag();
  return Key{std::bit_cast<std::uint64_t>(re), std::bit_cast<std::uint64_t>(im), k};
}

std::size_t GammaGridCache::KeyHash::operator()(const Key& key) const {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  };
  std::uint64_t h = mix(key.re);
  h = mix(h ^ key.im);
  h = mix(h ^ static_cast<std::uint64_t>(key.k));
  return static_cast<std::size_t>(h);
}

void GammaGridCache::prefill(std::span<const cplx> args, std::span<const long> ks,
                             int jobs) {
  if (args.size() != ks.size())
    throw domain_error("GammaGridCache::prefill: argument lists differ in length");
  std::vector<std::size_t> fresh;
  fresh.reserve(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    auto [it, inserted] = table_.emplace(make_key(args[i], ks[i]), cplx{});
    if (inserted) fresh.push_back(i);
    (void)it;
  }
  std::vector<cplx> values(fresh.size());
  parallel_for(fresh.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      std::size_t src = fresh[i];
      values[i] = gamma_rarefied(args[src], ks[src], *bases_, opts_);
    }
  }, jobs);
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    std::size_t src = fresh[i];
    table_[make_key(args[src], ks[src])] = values[i];
  }
}

cplx GammaGridCache::operator()(cplx arg, long k) const {
  auto it = table_.find(make_key(arg, k));
  if (it != table_.end()) return it->second;
  return gamma_rarefied(arg, k, *bases_, opts_);
}

cplx kernel_beta(const LatticePoint& pt, const BalancedParams& P, const Bases& b,
                 const GammaGridCache* cache) {
  if (pt.z.size() != 1 || pt.m.size() != 1)
    throw domain_error("kernel_beta: expects a rank-1 point");
  GammaSource G{b, cache};
  const cplx z = pt.z[0];
  const long m = pt.m[0];
  cplx num{1.0, 0.0};
  for (std::size_t a = 0; a < P.t.size(); ++a)
    num *= G(P.t[a] * z, P.n[a] + m + P.eps) * G(P.t[a] / z, P.n[a] - m);
  return num * gamma_pair_inv(z * z, 2 * m + P.eps, b);
}

cplx kernel_typeI_Cn(const LatticePoint& pt, const BalancedParams& P, const Bases& b,
                     const GammaGridCache* cache) {
  const std::size_t d = pt.z.size();
  if (d == 0 || pt.m.size() != d)
    throw domain_error("kernel_typeI_Cn: malformed lattice point");
  GammaSource G{b, cache};
  cplx val{1.0, 0.0};
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      val *= gamma_pair_inv(pt.z[i] * pt.z[j], pt.m[i] + pt.m[j] + P.eps, b);
      val *= gamma_pair_inv(pt.z[i] / pt.z[j], pt.m[i] - pt.m[j], b);
    }
  for (std::size_t j = 0; j < d; ++j) {
    cplx num{1.0, 0.0};
    for (std::size_t a = 0; a < P.t.size(); ++a)
      num *= G(P.t[a] * pt.z[j], P.n[a] + pt.m[j] + P.eps) *
             G(P.t[a] / pt.z[j], P.n[a] - pt.m[j]);
    val *= num * gamma_pair_inv(pt.z[j] * pt.z[j], 2 * pt.m[j] + P.eps, b);
  }
  return val;
}

cplx typeII_cross(cplx t, long n, cplx zj, long mj, cplx zk, long mk, long eps,
                  const Bases& b, const GammaGridCache* cache) {
  GammaSource G{b, cache};
  return G(t * zj * zk, n + mj + mk + eps) * G(t * zj / zk, n + mj - mk) *
         G(t * zk / zj, n - mj + mk) * G(t / (zj * zk), n - mj - mk - eps);
}

cplx kernel_typeII(const LatticePoint& pt, const BalancedParams& P, const Bases& b,
                   const GammaGridCache* cache) {
  const std::size_t d = pt.z.size();
  if (d == 0 || pt.m.size() != d)
    throw domain_error("kernel_typeII: malformed lattice point");
  GammaSource G{b, cache};
  cplx val{1.0, 0.0};
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      val *= typeII_cross(P.t_cross, P.n_cross, pt.z[i], pt.m[i], pt.z[j], pt.m[j],
                          P.eps, b, cache);
      val *= gamma_pair_inv(pt.z[i] * pt.z[j], pt.m[i] + pt.m[j] + P.eps, b);
      val *= gamma_pair_inv(pt.z[i] / pt.z[j], pt.m[i] - pt.m[j], b);
    }
  for (std::size_t j = 0; j < d; ++j) {
    cplx num{1.0, 0.0};
    for (std::size_t a = 0; a < P.t.size(); ++a)
      num *= G(P.t[a] * pt.z[j], P.n[a] + pt.m[j] + P.eps) *
             G(P.t[a] / pt.z[j], P.n[a] - pt.m[j]);
    val *= num * gamma_pair_inv(pt.z[j] * pt.z[j], 2 * pt.m[j] + P.eps, b);
  }
  return val;
}

cplx kernel_An(const LatticePoint& pt, const BalancedParams& P, const Bases& b,
               const GammaGridCache* cache) {
  const std::size_t d = pt.z.size();
  if (d == 0 || pt.m.size() != d)
    throw domain_error("kernel_An: malformed lattice point");
  GammaSource G{b, cache};
  std::vector<cplx> z(pt.z.begin(), pt.z.end());
  std::vector<long> m(pt.m.begin(), pt.m.end());
  cplx zprod{1.0, 0.0};
  long msum = 0;
  for (std::size_t j = 0; j < d; ++j) {
    zprod *= z[j];
    msum += m[j];
  }
  z.push_back(1.0 / zprod);
  m.push_back(P.eps - msum);

  cplx val{1.0, 0.0};
  for (std::size_t j = 0; j <= d; ++j)
    for (std::size_t a = 0; a < P.t.size(); ++a)
      val *= G(P.t[a] * z[j], P.n[a] + m[j]) * G(P.s[a] / z[j], P.k[a] - m[j]);
  for (std::size_t i = 0; i <= d; ++i)
    for (std::size_t j = i + 1; j <= d; ++j)
      val *= gamma_pair_inv(z[i] / z[j], m[i] - m[j], b);
  return val;
}

cplx kernel_value(const LatticePoint& pt, const BalancedParams& P, const Bases& b,
                  const GammaGridCache* cache) {
  switch (P.kind) {
    case ParamKind::Beta6:
    case ParamKind::V8:
      return kernel_beta(pt, P, b, cache);
    case ParamKind::TypeI_Cn:
    case ParamKind::TypeI_Cd_general:
      return kernel_typeI_Cn(pt, P, b, cache);
    case ParamKind::TypeII_Cn:
    case ParamKind::TypeII_Cd_V:
      return kernel_typeII(pt, P, b, cache);
    case ParamKind::TypeI_An:
      return kernel_An(pt, P, b, cache);
  }
  throw domain_error("kernel_value: unknown parameter kind");
}

int kernel_rank(const BalancedParams& P) {
  if (P.kind == ParamKind::Beta6 || P.kind == ParamKind::V8) return 1;
  if (P.kind == ParamKind::TypeI_Cn) return static_cast<int>((P.t.size() - 4) / 2);
  return P.rank;
}

std::pair<cplx, cplx> h_coefficients(cplx z, long m, const BalancedParams& P,
                                     const Bases& b, Truncation tr) {
  if (P.t.size() != 6)
    throw domain_error("h_coefficients: needs a 6-parameter pack");
  const cplx p = b.p, q = b.q;
  const long S = sum_of(P.n) + 3 * P.eps;
  const cplx z2 = z * z;

  cplx h1 = ipow(ipow(q, 2 * m + P.eps + 1) / (p * z2), S) * b.pq;
  for (std::size_t a = 0; a < 6; ++a)
    h1 *= theta(P.t[a] * z * ipow(q, -(P.n[a] + m + P.eps)), b.q_r, tr) /
          theta(p * z / P.t[a] * ipow(q, 1 + P.n[a] - m), b.q_r, tr);
  h1 *= theta(b.pq * b.pq * z2 * ipow(q, -(2 * m + P.eps)), b.q_r, tr) /
        theta(z2 * ipow(q, -(2 * m + P.eps)), b.q_r, tr);

  cplx h2 = ipow(ipow(p, 2 * m + P.eps + 1) / (q * z2), S) * b.pq;
  for (std::size_t a = 0; a < 6; ++a)
    h2 *= theta(P.t[a] * z * ipow(p, P.n[a] + m + P.eps), b.p_r, tr) /
          theta(q * z / P.t[a] * ipow(p, 1 - P.n[a] + m), b.p_r, tr);
  h2 *= theta(b.pq * b.pq * z2 * ipow(p, 2 * m + P.eps), b.p_r, tr) /
        theta(z2 * ipow(p, 2 * m + P.eps), b.p_r, tr);

  return {h1, h2};
}

cplx A_coefficient(std::span<const cplx> t, cplx p, cplx qr, Truncation tr) {
  if (t.size() != 8) throw domain_error("A_coefficient: needs 8 parameters");
  const cplx t1 = t[0], t2 = t[1], t3 = t[2];
  const cplx num[3] = {t1 / (p * t3), t3 * t1, t3 / t1};
  const cplx den[3] = {t1 / t2, t2 / (p * t1), t1 * t2 / p};
  cplx val = theta_product(num, qr, tr) / theta_product(den, qr, tr);
  for (std::size_t a = 3; a < 8; ++a)
    val *= theta(t2 * t[a] / p, qr, tr) / theta(t3 * t[a], qr, tr);
  return val;
}

cplx vandiejen_A(std::size_t j, std::span<const cplx> w, bool inverted,
                 const BalancedParams& P, const Bases& b, Truncation tr) {
  if (P.kind != ParamKind::TypeII_Cd_V)
    throw domain_error("vandiejen_A: needs a TypeII_Cd_V pack");
  if (j >= w.size()) throw domain_error("vandiejen_A: index out of range");
  const cplx qr = b.q_r;
  const cplx pq1r = b.pq / qr;  // p q^{1-r}
  auto at = [&](std::size_t l) { return inverted ? 1.0 / w[l] : w[l]; };

  const cplx wj = at(j);
  cplx val{1.0, 0.0};
  for (std::size_t a = 0; a < 8; ++a)
    val *= theta(P.t[a] * ipow(b.q, -P.n[a]) * wj, qr, tr);
  val /= theta(wj * wj, qr, tr) * theta(pq1r * wj * wj, qr, tr);
  const cplx tc = P.t_cross * ipow(b.q, -P.n_cross);
  for (std::size_t l = 0; l < w.size(); ++l) {
    if (l == j) continue;
    const cplx wl = at(l);
    val *= theta_pm(tc * wj, wl, qr, tr) / theta_pm(wj, wl, qr, tr);
  }
  return val;
}

double typeI_theta_identity_residual(std::span<const cplx> t, std::span<const long> nn,
                                     std::span<const cplx> z, std::span<const long> mm,
                                     long eps, cplx q, int r, Truncation tr) {
  const std::size_t rank = z.size();
  if (rank == 0 || mm.size() != rank || t.size() != 2 * rank + 3 ||
      nn.size() != t.size())
    throw domain_error("typeI_theta_identity_residual: malformed input");
  const cplx qr = ipow(q, r);
  auto th = [&](cplx x) { return theta(x, qr, tr); };
  auto qp = [&](long e) { return ipow(q, e); };

  cplx A{1.0, 0.0};
  long N = (static_cast<long>(rank) + 2) * eps;
  for (std::size_t a = 0; a < t.size(); ++a) {
    A *= t[a];
    N += nn[a];
  }
  const cplx t1 = t[0];
  const long n1 = nn[0];

  cplx lhs{1.0, 0.0};
  for (std::size_t j = 0; j < rank; ++j)
    lhs *= th(t1 * z[j] * qp(-n1 - mm[j] - eps)) * th(t1 / z[j] * qp(-n1 + mm[j])) /
           (th(A * z[j] * qp(-N - mm[j])) * th(A / z[j] * qp(-N + mm[j] + eps)));
  for (std::size_t a = 1; a < t.size(); ++a)
    lhs *= th(A / t[a] * qp(-N + nn[a] + eps)) / th(t1 * t[a] * qp(-n1 - nn[a] - eps));
  lhs -= 1.0;

  cplx pref = t1 * qp(-n1) * th(t1 * A * qp(-n1 - N));
  for (std::size_t a = 1; a < t.size(); ++a)
    pref /= th(t1 * t[a] * qp(-n1 - nn[a] - eps));

  cplx sum{};
  for (std::size_t k = 0; k < rank; ++k) {
    cplx term = qp(mm[k]) / (z[k] * th(z[k] * z[k] * qp(-2 * mm[k] - eps)));
    for (std::size_t j = 0; j < rank; ++j) {
      if (j == k) continue;
      term *= th(t1 * z[j] * qp(-n1 - mm[j] - eps)) * th(t1 / z[j] * qp(-n1 + mm[j])) /
              (th(z[k] * z[j] * qp(-mm[k] - mm[j] - eps)) *
               th(z[k] / z[j] * qp(-mm[k] + mm[j])));
    }
    cplx first = ipow(z[k], 2 * static_cast<long>(rank) + 2);
    for (std::size_t a = 0; a < t.size(); ++a)
      first *= th(t[a] / z[k] * qp(-nn[a] + mm[k]));
    first /= qp((static_cast<long>(rank) + 1) * (2 * mm[k] + eps)) *
             th(A / z[k] * qp(-N + mm[k] + eps));
    cplx second{1.0, 0.0};
    for (std::size_t a = 0; a < t.size(); ++a)
      second *= th(t[a] * z[k] * qp(-nn[a] - mm[k] - eps));
    second /= th(A * z[k] * qp(-N - mm[k]));
    sum += term * (first - second);
  }
  const cplx rhs = pref * sum;

  double scale = std::max(std::abs(lhs), std::abs(rhs));
  return std::abs(lhs - rhs) / std::max(scale, 1e-300);
}

}  // namespace rehf
