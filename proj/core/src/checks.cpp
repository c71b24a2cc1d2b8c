#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rehf/quadrature.hpp"
#include "rehf/verify.hpp"

namespace rehf {

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

double ratio_dev(cplx lhs, cplx rhs) {
  double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  return std::abs(lhs - rhs) / scale;
}

IdentityReport make_report(std::string id, const BalancedParams& P, const Bases& b,
                           double tol) {
  IdentityReport rep;
  rep.identity_id = std::move(id);
  rep.params = P;
  rep.p = b.p;
  rep.q = b.q;
  rep.r = b.r;
  rep.tolerance = tol;
  return rep;
}

void finish(IdentityReport& rep, clock_type::time_point t0) {
  rep.pass = rep.rel_dev <= rep.tolerance;
  rep.wall_ms = ms_since(t0);
}

// least-squares slope of y against x
double fit_slope(std::span<const double> x, std::span<const double> y) {
  double xm = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double ym = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - xm) * (y[i] - ym);
    den += (x[i] - xm) * (x[i] - xm);
  }
  return num / den;
}

BalancedParams echo_pack(ParamKind kind, std::span<const cplx> t, std::span<const long> n,
                         long eps) {
  BalancedParams P;
  P.kind = kind;
  P.t.assign(t.begin(), t.end());
  P.n.assign(n.begin(), n.end());
  P.eps = eps;
  return P;
}

cplx eval_U(std::vector<cplx> t, std::vector<long> n, long eps, const Bases& b,
            const GridSpec& g, int& grid_used) {
  BalancedParams P;
  P.kind = ParamKind::V8;
  P.t = std::move(t);
  P.n = std::move(n);
  P.eps = eps;
  P.rank = 1;
  P.validate(b);
  auto V = eval_V(P, b, g);
  grid_used = std::max(grid_used, V.grid_used);
  cplx denom = 1.0;
  for (int a = 0; a < 2; ++a)
    denom *= gamma_rarefied(P.t[a] * P.t[2], P.n[a] + P.n[2] + eps, b) *
             gamma_rarefied(P.t[a] / P.t[2], P.n[a] - P.n[2], b);
  return V.value / denom;
}

}  // namespace

IdentityReport check_rfint(const BalancedParams& P, const Bases& b, const GridSpec& g,
                           double tol) {
  auto t0 = clock_type::now();
  IdentityReport rep = make_report("rfint", P, b, tol);
  SumIntegralSpec spec{P, b, g, {}};
  auto lhs = eval_lhs(spec);
  rep.lhs = lhs.value;
  rep.rhs = eval_rhs(P, b);
  rep.grid_used = lhs.grid_used;
  rep.rel_dev = ratio_dev(rep.lhs, rep.rhs);
  finish(rep, t0);
  return rep;
}

IdentityReport check_typeI_Cn(const BalancedParams& P, const Bases& b, const GridSpec& g,
                              double tol) {
  if (tol == 0.0) tol = P.rank == 1 ? 1e-8 : 1e-6;
  auto t0 = clock_type::now();
  IdentityReport rep = make_report("typeI-Cn", P, b, tol);
  SumIntegralSpec spec{P, b, g, {}};
  auto lhs = eval_lhs(spec);
  rep.lhs = lhs.value;
  rep.rhs = eval_rhs(P, b);
  rep.grid_used = lhs.grid_used;
  rep.rel_dev = ratio_dev(rep.lhs, rep.rhs);
  finish(rep, t0);
  return rep;
}

IdentityReport check_typeII_Cn(const BalancedParams& P, const Bases& b, const GridSpec& g,
                               double tol) {
  if (tol == 0.0) tol = P.rank == 1 ? 1e-8 : 1e-6;
  auto t0 = clock_type::now();
  IdentityReport rep = make_report("typeII-Cn", P, b, tol);
  SumIntegralSpec spec{P, b, g, {}};
  auto lhs = eval_lhs(spec);
  rep.lhs = lhs.value;
  rep.rhs = eval_rhs(P, b);
  rep.grid_used = lhs.grid_used;
  rep.rel_dev = ratio_dev(rep.lhs, rep.rhs);
  finish(rep, t0);
  return rep;
}

E7Image e7_image(const BalancedParams& P, const Bases& b, int which) {
  if (P.kind != ParamKind::V8 || P.t.size() != 8)
    throw domain_error("e7_image expects an 8-parameter V pack");
  auto G = [&](cplx z, long k) { return gamma_rarefied(z, k, b); };
  E7Image img;
  img.params = P;
  cplx pref = 1.0;
  const long s4 = P.n[0] + P.n[1] + P.n[2] + P.n[3];
  const long s8 = s4 + P.n[4] + P.n[5] + P.n[6] + P.n[7];
  if (which == 1) {
    const long delta = ((s4 + P.eps) % 2 + 2) % 2;
    const long sh1 = (s4 + P.eps + delta) / 2;
    const long sh2 = (s8 - s4 + P.eps + delta) / 2;
    const cplx f = principal_sqrt(b.pq / (P.t[0] * P.t[1] * P.t[2] * P.t[3]));
    for (int a = 0; a < 4; ++a) {
      img.params.t[a] = f * P.t[a];
      img.params.n[a] = P.n[a] - sh1;
      img.params.t[a + 4] = P.t[a + 4] / f;
      img.params.n[a + 4] = P.n[a + 4] - sh2;
    }
    img.params.eps = delta;
    for (int u = 0; u < 4; ++u)
      for (int v = u + 1; v < 4; ++v)
        pref *= G(P.t[u] * P.t[v], P.n[u] + P.n[v] + P.eps) *
                G(P.t[u + 4] * P.t[v + 4], P.n[u + 4] + P.n[v + 4] + P.eps);
  } else if (which == 2) {
    const long rho = ((s4 + P.eps) % 2 + 2) % 2;
    const long sh1 = (s4 + P.eps - rho) / 2;
    const long sh2 = (s8 - s4 + P.eps - rho) / 2;
    const cplx c1 = principal_sqrt(P.t[0] * P.t[1] * P.t[2] * P.t[3]);
    const cplx c2 = b.pq / c1;
    for (int a = 0; a < 4; ++a) {
      img.params.t[a] = c1 / P.t[a];
      img.params.n[a] = -P.n[a] + sh1;
      img.params.t[a + 4] = c2 / P.t[a + 4];
      img.params.n[a + 4] = -P.n[a + 4] + sh2;
    }
    img.params.eps = rho;
    for (int u = 0; u < 4; ++u)
      for (int v = 4; v < 8; ++v) pref *= G(P.t[u] * P.t[v], P.n[u] + P.n[v] + P.eps);
  } else if (which == 3) {
    for (int a = 0; a < 8; ++a) {
      img.params.t[a] = b.sqrt_pq / P.t[a];
      img.params.n[a] = -P.n[a] - P.eps;
    }
    img.params.eps = P.eps;
    for (int u = 0; u < 8; ++u)
      for (int v = u + 1; v < 8; ++v) pref *= G(P.t[u] * P.t[v], P.n[u] + P.n[v] + P.eps);
  } else {
    throw domain_error("e7_image: which must be 1, 2, or 3");
  }
  img.prefactor = pref;
  return img;
}

IdentityReport check_E7(const BalancedParams& P, const Bases& b, const GridSpec& g,
                        int which, double tol) {
  auto t0 = clock_type::now();
  E7Image img = e7_image(P, b, which);
  img.params.validate(b);
  IdentityReport rep = make_report("e7trafo" + std::to_string(which), P, b, tol);
  auto L = eval_V(P, b, g);
  auto R = eval_V(img.params, b, g);
  rep.lhs = L.value;
  rep.rhs = img.prefactor * R.value;
  rep.grid_used = std::max(L.grid_used, R.grid_used);
  rep.rel_dev = ratio_dev(rep.lhs, rep.rhs);
  finish(rep, t0);
  if (img.params.eps != P.eps) rep.note = "parity flip";
  return rep;
}

IdentityReport check_E7_roundtrip(const BalancedParams& P, const Bases& b, double tol) {
  auto t0 = clock_type::now();
  IdentityReport rep = make_report("e7trafo1-roundtrip", P, b, tol);
  E7Image img1 = e7_image(P, b, 1);
  E7Image img2 = e7_image(img1.params, b, 1);
  rep.lhs = img1.prefactor * img2.prefactor;
  rep.rhs = 1.0;
  double dev = ratio_dev(rep.lhs, rep.rhs);
  // the square returns the parameters up to one global sign on all t_a,
  // which leaves the function unchanged
  cplx sign = std::abs(img2.params.t[0] - P.t[0]) <= std::abs(img2.params.t[0] + P.t[0])
                  ? cplx{1.0, 0.0}
                  : cplx{-1.0, 0.0};
  for (int a = 0; a < 8; ++a)
    dev = std::max(dev, std::abs(sign * img2.params.t[a] - P.t[a]) / std::abs(P.t[a]));
  if (img2.params.n != P.n || img2.params.eps != P.eps) dev = std::max(dev, 1.0);
  rep.rel_dev = dev;
  finish(rep, t0);
  rep.note = "square of the transformation restores the pack";
  return rep;
}

IdentityReport check_contiguous(std::span<const cplx> t, std::span<const long> n, long eps,
                                const Bases& b, const GridSpec& g, double tol) {
  auto t0 = clock_type::now();
  if (t.size() != 8 || n.size() != 8)
    throw domain_error("check_contiguous expects 8 parameters");
  long nsum = std::accumulate(n.begin(), n.end(), 0L);
  if (nsum + 4 * eps != 1)
    throw domain_error("check_contiguous needs sum n + 4 eps = 1");
  cplx prod = 1.0;
  for (cplx ta : t) prod *= ta;
  if (ratio_dev(prod, b.p * b.q * b.q) > 1e-8)
    throw domain_error("check_contiguous needs prod t = p q^2");
  IdentityReport rep = make_report("cont1", echo_pack(ParamKind::V8, t, n, eps), b, tol);
  std::array<cplx, 3> term{};
  int grid_used = 0;
  for (int i = 0; i < 3; ++i) {
    BalancedParams Pb = echo_pack(ParamKind::V8, t, n, eps);
    Pb.t[i] *= b.p;
    Pb.n[i] -= 1;
    Pb.validate(b);
    auto V = eval_V(Pb, b, g);
    grid_used = std::max(grid_used, V.grid_used);
    cplx denom = 1.0;
    for (int j : {(i + 1) % 3, (i + 2) % 3}) {
      denom *= theta(t[i] * t[j] * ipow(b.q, -n[i] - n[j] - eps), b.q_r) *
               theta(t[i] / t[j] * ipow(b.q, -n[i] + n[j]), b.q_r);
    }
    cplx pre = ipow(t[i], 1 + 2 * n[i] + eps) *
               ipow(b.q, -n[i] * (n[i] + 2) - eps * (n[i] + 1));
    term[i] = pre * V.value / denom;
  }
  cplx resid = term[0] + term[1] + term[2];
  double scale = std::max({std::abs(term[0]), std::abs(term[1]), std::abs(term[2])});
  rep.lhs = resid;
  rep.rhs = 0.0;
  rep.grid_used = grid_used;
  rep.rel_dev = std::abs(resid) / scale;
  finish(rep, t0);
  return rep;
}

IdentityReport check_reheq(std::span<const cplx> t, std::span<const long> n, long eps,
                           const Bases& b, const GridSpec& g, bool base_swapped,
                           double tol) {
  auto t0 = clock_type::now();
  if (t.size() != 8 || n.size() != 8) throw domain_error("check_reheq expects 8 parameters");
  IdentityReport rep = make_report(base_swapped ? "reheq-par" : "reheq",
                                   echo_pack(ParamKind::V8, t, n, eps), b, tol);
  std::array<cplx, 8> u{};
  cplx p_eff, base;
  if (!base_swapped) {
    const cplx shift_root = eps ? 1.0 / principal_sqrt(b.q) : cplx{1.0, 0.0};
    for (int a = 0; a < 8; ++a) u[a] = t[a] * ipow(b.q, -n[a]) * shift_root;
    p_eff = b.pq / b.q_r;
    base = b.q_r;
  } else {
    const cplx shift_root = eps ? principal_sqrt(b.p) : cplx{1.0, 0.0};
    for (int a = 0; a < 8; ++a) u[a] = t[a] * ipow(b.p, n[a]) * shift_root;
    p_eff = b.pq / b.p_r;
    base = b.p_r;
  }
  cplx a1 = A_coefficient(u, p_eff, base);
  std::swap(u[0], u[1]);
  cplx a2 = A_coefficient(u, p_eff, base);
  std::vector<cplx> tv(t.begin(), t.end());
  std::vector<long> nv(n.begin(), n.end());
  int grid_used = 0;
  cplx u0 = eval_U(tv, nv, eps, b, g, grid_used);
  auto shifted = [&](int dir) {  // dir=+1: first slot up, second down
    std::vector<cplx> ts = tv;
    std::vector<long> ns = nv;
    cplx w = base_swapped ? b.q : b.p;
    long dm = base_swapped ? 1 : -1;
    ts[0] = dir > 0 ? ts[0] * w : ts[0] / w;
    ts[1] = dir > 0 ? ts[1] / w : ts[1] * w;
    ns[0] += dir > 0 ? dm : -dm;
    ns[1] -= dir > 0 ? dm : -dm;
    return eval_U(std::move(ts), std::move(ns), eps, b, g, grid_used);
  };
  cplx u_fwd = shifted(+1);
  cplx u_bwd = shifted(-1);
  cplx term1 = a1 * (u_fwd - u0);
  cplx term2 = a2 * (u_bwd - u0);
  cplx resid = term1 + term2 + u0;
  double scale = std::max({std::abs(term1), std::abs(term2), std::abs(u0)});
  rep.lhs = resid;
  rep.rhs = 0.0;
  rep.grid_used = grid_used;
  rep.rel_dev = std::abs(resid) / scale;
  finish(rep, t0);
  return rep;
}

IdentityReport check_reheq_sym(std::span<const cplx> t, std::span<const long> n,
                               const Bases& b, const GridSpec& g, double tol) {
  auto t0 = clock_type::now();
  if (t.size() != 8 || n.size() != 8)
    throw domain_error("check_reheq_sym expects 8 parameters");
  if (((n[0] - n[1]) % 2 + 2) % 2 != 0)
    throw domain_error("symmetric form needs n_1 = n_2 mod 2");
  IdentityReport rep = make_report("reheq-sym", echo_pack(ParamKind::V8, t, n, 0), b, tol);
  const cplx c = principal_sqrt(t[0] * t[1]);
  const cplx x = t[0] / c;
  const long nc = (n[0] + n[1]) / 2;
  const long nn = (n[0] - n[1]) / 2;
  const cplx p_eff = b.pq / b.q_r;
  std::array<cplx, 8> s{};
  std::array<long, 8> k{};
  s[0] = c / (t[2] * p_eff);
  k[0] = nc - n[2];
  s[1] = c / t[2];
  k[1] = nc - n[2];
  s[2] = c * t[2] * ipow(b.q_r, 4);
  k[2] = nc + n[2];
  for (int a = 3; a < 8; ++a) {
    s[a] = p_eff / (c * t[a]);
    k[a] = -nc - n[a];
  }
  auto coef = [&](cplx xx) {
    cplx num = 1.0;
    for (int a = 0; a < 8; ++a) num *= theta(s[a] * xx * ipow(b.q, -k[a]), b.q_r);
    return num / (theta(xx * xx, b.q_r) * theta(p_eff * xx * xx, b.q_r));
  };
  cplx nu = 1.0;
  for (int a = 2; a < 8; ++a) nu *= theta(s[0] * s[a] * ipow(b.q, -k[0] - k[a]), b.q_r);
  int grid_used = 0;
  auto f = [&](cplx xx, long m) {
    std::vector<cplx> tv(t.begin(), t.end());
    std::vector<long> nv(n.begin(), n.end());
    tv[0] = c * xx;
    tv[1] = c / xx;
    nv[0] = nc + m;
    nv[1] = nc - m;
    return eval_U(std::move(tv), std::move(nv), 0, b, g, grid_used);
  };
  cplx f0 = f(x, nn);
  cplx term1 = coef(x * ipow(b.q, -nn)) * (f(b.p * x, nn - 1) - f0);
  cplx term2 = coef(ipow(b.q, nn) / x) * (f(x / b.p, nn + 1) - f0);
  cplx term3 = nu * f0;
  cplx resid = term1 + term2 + term3;
  double scale = std::max({std::abs(term1), std::abs(term2), std::abs(term3)});
  rep.lhs = resid;
  rep.rhs = 0.0;
  rep.grid_used = grid_used;
  rep.rel_dev = std::abs(resid) / scale;
  finish(rep, t0);
  return rep;
}

IdentityReport check_vandiejen_null(const BalancedParams& P, const Bases& b,
                                    std::span<const LatticePoint> pts, double tol) {
  auto t0 = clock_type::now();
  IdentityReport rep = make_report("vandiejen-null", P, b, tol);
  LatticeFn one = [](const LatticePoint&) { return cplx{1.0, 0.0}; };
  double worst = 0.0;
  for (const auto& pt : pts) {
    cplx d1 = apply_vandiejen(one, pt, P, b);
    std::vector<cplx> w(pt.z.size());
    for (std::size_t l = 0; l < pt.z.size(); ++l) w[l] = pt.z[l] * ipow(b.q, -pt.m[l]);
    double scale = 0.0;
    for (std::size_t j = 0; j < pt.z.size(); ++j)
      scale += std::abs(vandiejen_A(j, w, false, P, b)) +
               std::abs(vandiejen_A(j, w, true, P, b));
    worst = std::max(worst, std::abs(d1) / scale);
    if (worst == std::abs(d1) / scale) {
      rep.lhs = d1;
      rep.rhs = 0.0;
    }
  }
  rep.rel_dev = worst;
  finish(rep, t0);
  rep.note = std::to_string(pts.size()) + " lattice points";
  return rep;
}

IdentityReport check_vandiejen_symmetry(const BalancedParams& P, const Bases& b,
                                        const GridSpec& g, double tol) {
  auto t0 = clock_type::now();
  IdentityReport rep = make_report("vandiejen-symmetry", P, b, tol);
  const int r = b.r;
  LatticeFn f = [](const LatticePoint& pt) {
    cplx acc{};
    for (cplx z : pt.z) acc += z + 1.0 / z;
    return acc;
  };
  LatticeFn h = [r](const LatticePoint& pt) {
    cplx acc{};
    for (std::size_t l = 0; l < pt.z.size(); ++l)
      acc += std::cos(2.0 * std::numbers::pi * pt.m[l] / r) *
             (pt.z[l] * pt.z[l] + 1.0 / (pt.z[l] * pt.z[l]));
    return acc;
  };
  LatticeFn df = [&](const LatticePoint& pt) { return apply_vandiejen(f, pt, P, b); };
  LatticeFn dh = [&](const LatticePoint& pt) { return apply_vandiejen(h, pt, P, b); };
  auto L = inner_product(f, dh, P, b, g);
  auto R = inner_product(df, h, P, b, g);
  rep.lhs = L.value;
  rep.rhs = R.value;
  rep.grid_used = std::max(L.grid_used, R.grid_used);
  rep.rel_dev = ratio_dev(rep.lhs, rep.rhs);
  finish(rep, t0);
  return rep;
}

IdentityReport check_rahman(std::span<const cplx> t, cplx q, int r, double tol) {
  auto t0 = clock_type::now();
  if (t.size() != 5) throw domain_error("check_rahman expects 5 parameters");
  const cplx qr = ipow(q, r);
  cplx big_a = 1.0;
  for (cplx ta : t) big_a *= ta;
  auto f = [&](cplx z) {
    cplx num = qpochhammer_inf(big_a * z, qr) * qpochhammer_inf(big_a / z, qr) *
               qpochhammer_inf(z * z, qr) * qpochhammer_inf(1.0 / (z * z), qr);
    cplx den = 1.0;
    for (cplx ta : t) den *= qpochhammer_inf(ta * z, qr) * qpochhammer_inf(ta / z, qr);
    return num / den;
  };
  GridSpec g;
  g.points_per_dim = 64;
  g.target_rel = 1e-12;
  auto integral = torus_integral(std::function<cplx(cplx)>(f), g);
  IdentityReport rep;
  rep.identity_id = "rahman";
  rep.q = q;
  rep.r = r;
  rep.tolerance = tol;
  std::vector<long> zeros(5, 0);
  rep.params = echo_pack(ParamKind::Beta6, t, zeros, 0);
  rep.lhs = qpochhammer_inf(qr, qr) * 0.5 * integral.value;
  cplx rhs = 1.0;
  for (int a = 0; a < 5; ++a) rhs *= qpochhammer_inf(big_a / t[a], qr);
  for (int a = 0; a < 5; ++a)
    for (int c = a + 1; c < 5; ++c) rhs /= qpochhammer_inf(t[a] * t[c], qr);
  rep.rhs = rhs;
  rep.grid_used = integral.grid_used;
  rep.rel_dev = ratio_dev(rep.lhs, rep.rhs);
  finish(rep, t0);
  return rep;
}

IdentityReport check_new_qbeta(std::span<const cplx> t, cplx q, int r, bool flipped,
                               double tol) {
  auto t0 = clock_type::now();
  if (t.size() != 5) throw domain_error("check_new_qbeta expects 5 parameters");
  if (r < 2) throw domain_error("check_new_qbeta needs r >= 2");
  const cplx qr = ipow(q, r);
  const cplx g1 = flipped ? q : ipow(q, r - 1);
  const cplx g2 = flipped ? ipow(q, r - 1) : q;
  cplx big_a = 1.0;
  for (cplx ta : t) big_a *= ta;
  auto f = [&](cplx z) {
    cplx num = qpochhammer_inf(g1 * big_a * z, qr) * qpochhammer_inf(big_a / z, qr) *
               qpochhammer_inf(g1 * z * z, qr) * qpochhammer_inf(g2 / (z * z), qr);
    cplx den = 1.0;
    for (int a = 0; a < 3; ++a)
      den *= qpochhammer_inf(g1 * t[a] * z, qr) * qpochhammer_inf(t[a] / z, qr);
    for (int a = 3; a < 5; ++a)
      den *= qpochhammer_inf(t[a] * z, qr) * qpochhammer_inf(g2 * t[a] / z, qr);
    return num / den;
  };
  GridSpec g;
  g.points_per_dim = 64;
  g.target_rel = 1e-12;
  auto integral = torus_integral(std::function<cplx(cplx)>(f), g);
  IdentityReport rep;
  rep.identity_id = flipped ? "new-qbeta-flip" : "new-qbeta";
  rep.q = q;
  rep.r = r;
  rep.tolerance = tol;
  std::vector<long> zeros(5, 0);
  rep.params = echo_pack(ParamKind::Beta6, t, zeros, 0);
  rep.lhs = qpochhammer_inf(qr, qr) * integral.value;
  cplx rhs = 1.0;
  for (int a = 0; a < 3; ++a) rhs *= qpochhammer_inf(big_a / t[a], qr);
  for (int a = 3; a < 5; ++a) rhs *= qpochhammer_inf(g1 * big_a / t[a], qr);
  for (int a = 0; a < 3; ++a)
    for (int c = a + 1; c < 3; ++c) rhs /= qpochhammer_inf(g1 * t[a] * t[c], qr);
  for (int a = 0; a < 3; ++a)
    for (int c = 3; c < 5; ++c) rhs /= qpochhammer_inf(t[a] * t[c], qr);
  rhs /= qpochhammer_inf(g2 * t[3] * t[4], qr);
  rep.rhs = rhs;
  rep.grid_used = integral.grid_used;
  rep.rel_dev = ratio_dev(rep.lhs, rep.rhs);
  finish(rep, t0);
  return rep;
}

IdentityReport check_mellin_barnes(std::span<const double> u, int r, bool flipped,
                                   double tol) {
  auto t0 = clock_type::now();
  if (u.size() != 5) throw domain_error("check_mellin_barnes expects 5 parameters");
  if (r < 2) throw domain_error("check_mellin_barnes needs r >= 2");
  double k1 = static_cast<double>(r - 1) / r;
  double k2 = 1.0 / r;
  if (flipped) std::swap(k1, k2);
  const double big_u = std::accumulate(u.begin(), u.end(), 0.0);
  auto lg = [](cplx z) { return log_gamma_classical(z); };
  auto f = [&](cplx x) {
    cplx acc{};
    for (int a = 0; a < 3; ++a) acc += lg(k1 + u[a] + x) + lg(u[a] - x);
    for (int a = 3; a < 5; ++a) acc += lg(u[a] + x) + lg(k2 + u[a] - x);
    acc -= lg(k1 + big_u + x) + lg(big_u - x) + lg(k1 + 2.0 * x) + lg(k2 - 2.0 * x);
    return std::exp(acc);
  };
  auto integral = vertical_line_integral(f, 16.0, 512, 10, 1e-11);
  IdentityReport rep;
  rep.identity_id = flipped ? "mellin-barnes-flip" : "mellin-barnes";
  rep.r = r;
  rep.tolerance = tol;
  rep.params.kind = ParamKind::Beta6;
  for (double ua : u) rep.params.t.push_back(cplx{ua, 0.0});
  rep.params.n.assign(5, 0);
  rep.lhs = integral.value;
  cplx acc{};
  for (int a = 0; a < 3; ++a)
    for (int c = a + 1; c < 3; ++c) acc += lg(k1 + u[a] + u[c]);
  for (int a = 0; a < 3; ++a)
    for (int c = 3; c < 5; ++c) acc += lg(u[a] + u[c]);
  acc += lg(k2 + u[3] + u[4]);
  for (int a = 0; a < 3; ++a) acc -= lg(big_u - u[a]);
  for (int a = 3; a < 5; ++a) acc -= lg(k1 + big_u - u[a]);
  rep.rhs = std::exp(acc);
  rep.grid_used = integral.grid_used;
  rep.rel_dev = ratio_dev(rep.lhs, rep.rhs);
  finish(rep, t0);
  return rep;
}

IdentityReport check_smallp_gamma_rate(cplx z, cplx q, int r, double slope_tol) {
  auto t0 = clock_type::now();
  IdentityReport rep;
  rep.identity_id = "limit-smallp-gamma";
  rep.q = q;
  rep.r = r;
  rep.tolerance = slope_tol;
  rep.params.kind = ParamKind::Beta6;
  rep.params.t = {z};
  rep.params.n = {0};
  const std::array<double, 3> ps{1e-3, 1e-4, 1e-5};
  double worst = 0.0;
  std::array<double, 2> slopes{};
  for (long m = 0; m <= 1; ++m) {
    std::array<double, 3> lx{}, ly{};
    for (int i = 0; i < 3; ++i) {
      Bases b(ps[i], q, r);
      cplx exact = gamma_lens(z, m, b);
      cplx lead = small_p_asymptotic(z, m, ps[i], q, r);
      lx[i] = std::log(ps[i]);
      ly[i] = std::log(std::abs(exact / lead - 1.0));
    }
    slopes[m] = fit_slope(lx, ly);
    worst = std::max(worst, std::abs(slopes[m] - 1.0));
  }
  rep.lhs = slopes[0];
  rep.rhs = slopes[1];
  rep.rel_dev = worst;
  finish(rep, t0);
  rep.note = "deviation slopes for m = 0, 1 against expected 1.0";
  return rep;
}

IdentityReport check_cm_scaling(long eps, int r, double slope_tol) {
  // Coefficients of the rank-1 sum-integral written with the unnormalized lens
  // gamma, with n = (0,0,0,-eps,-eps,-eps) and the last parameter carrying the
  // balancing (so it shrinks linearly with p). For eps = 1 the m-th coefficient
  // scales as p^{m+3/4}; for eps = 0 the quarter power cancels and it is p^m.
  auto t0 = clock_type::now();
  IdentityReport rep;
  rep.identity_id = "limit-cm-scaling";
  rep.r = r;
  rep.tolerance = slope_tol;
  const cplx q{0.32, 0.08};
  const std::array<cplx, 5> tfix{cplx{0.55, 0.10}, cplx{0.42, -0.31}, cplx{-0.47, 0.12},
                                 cplx{0.38, 0.29}, cplx{0.52, 0.05}};
  const std::array<double, 3> ps{1e-3, 3e-4, 1e-4};
  std::array<std::array<double, 3>, 2> mags{};
  int grid_used = 0;
  for (int i = 0; i < 3; ++i) {
    Bases b(ps[i], q, r);
    std::array<cplx, 6> t{};
    std::copy(tfix.begin(), tfix.end(), t.begin());
    cplx prod = 1.0;
    for (cplx ta : tfix) prod *= ta;
    t[5] = b.pq / prod;
    std::array<long, 6> n{0, 0, 0, -eps, -eps, -eps};
    cplx kappa = 0.5 * b.poch_p_r * b.poch_q_r;
    for (long m = 0; m <= 1; ++m) {
      auto f = [&](cplx z) {
        cplx num = 1.0;
        for (int a = 0; a < 6; ++a)
          num *= gamma_lens(t[a] * z, n[a] + m + eps, b) * gamma_lens(t[a] / z, n[a] - m, b);
        cplx den = ipow(z, 2 * m + eps) * gamma_lens(z * z, 2 * m + eps, b) *
                   gamma_lens(1.0 / (z * z), -(2 * m + eps), b);
        return num / den;
      };
      GridSpec g;
      g.points_per_dim = 64;
      g.target_rel = 1e-11;
      auto avg = torus_integral(std::function<cplx(cplx)>(f), g);
      double mexp = (m + 0.5 * eps) * (m + 0.5 * eps);
      cplx cm = kappa * std::pow(q / ps[i], mexp) * avg.value;
      mags[m][i] = std::log(std::abs(cm));
      grid_used = std::max(grid_used, avg.grid_used);
    }
  }
  std::array<double, 3> lx{};
  for (int i = 0; i < 3; ++i) lx[i] = std::log(ps[i]);
  double worst = 0.0;
  std::array<double, 2> slopes{};
  for (long m = 0; m <= 1; ++m) {
    slopes[m] = fit_slope(lx, mags[m]);
    double expected = m + (eps ? 0.75 : 0.0);
    worst = std::max(worst, std::abs(slopes[m] - expected));
  }
  rep.q = q;
  rep.p = ps[1];
  rep.params.kind = ParamKind::Beta6;
  rep.params.eps = eps;
  rep.lhs = slopes[0];
  rep.rhs = slopes[1];
  rep.grid_used = grid_used;
  rep.rel_dev = worst;
  finish(rep, t0);
  rep.note = eps ? "expected slopes m + 3/4" : "expected slopes m";
  return rep;
}

IdentityReport check_conj_CdCm(const BalancedParams& P, const Bases& b, const GridSpec& g,
                               double tol) {
  auto t0 = clock_type::now();
  if (P.kind != ParamKind::TypeI_Cd_general)
    throw domain_error("check_conj_CdCm expects a general type I pack");
  const int d = P.rank;
  const int mpow = static_cast<int>(P.t.size()) / 2 - d - 2;
  if (mpow < 1) throw domain_error("check_conj_CdCm needs product power >= 2");
  BalancedParams Q = P;
  Q.rank = mpow;
  for (std::size_t a = 0; a < P.t.size(); ++a) {
    Q.t[a] = b.sqrt_pq / P.t[a];
    Q.n[a] = -P.n[a] - P.eps;
  }
  Q.validate(b);
  IdentityReport rep = make_report("conj-cdcm", P, b, tol);
  rep.conjecture = true;
  cplx pref = 1.0;
  for (std::size_t a = 0; a < P.t.size(); ++a)
    for (std::size_t c = a + 1; c < P.t.size(); ++c)
      pref *= gamma_rarefied(P.t[a] * P.t[c], P.n[a] + P.n[c] + P.eps, b);
  SumIntegralSpec specL{P, b, g, {}};
  SumIntegralSpec specR{Q, b, g, {}};
  auto L = eval_lhs(specL);
  auto R = eval_lhs(specR);
  rep.lhs = L.value;
  rep.rhs = pref * R.value;
  rep.grid_used = std::max(L.grid_used, R.grid_used);
  rep.rel_dev = ratio_dev(rep.lhs, rep.rhs);
  finish(rep, t0);
  rep.note = rep.pass ? "conjecture-consistent" : "conjecture deviation";
  return rep;
}

IdentityReport check_conj_typeII_Cd(const BalancedParams& P, const Bases& b,
                                    const GridSpec& g, double tol) {
  auto t0 = clock_type::now();
  if (P.kind != ParamKind::TypeII_Cd_V)
    throw domain_error("check_conj_typeII_Cd expects a type II V pack");
  const int d = P.rank;
  const long s4 = P.n[0] + P.n[1] + P.n[2] + P.n[3];
  const long s8 = s4 + P.n[4] + P.n[5] + P.n[6] + P.n[7];
  const long base1 = s4 + (d - 1) * P.n_cross + P.eps;
  const long delta = (base1 % 2 + 2) % 2;
  const long sh1 = (base1 + delta) / 2;
  const long sh2 = (s8 - s4 + (d - 1) * P.n_cross + P.eps + delta) / 2;
  const cplx f =
      principal_sqrt(b.pq * ipow(P.t_cross, 1 - d) / (P.t[0] * P.t[1] * P.t[2] * P.t[3]));
  BalancedParams Q = P;
  Q.eps = delta;
  for (int a = 0; a < 4; ++a) {
    Q.t[a] = f * P.t[a];
    Q.n[a] = P.n[a] - sh1;
    Q.t[a + 4] = P.t[a + 4] / f;
    Q.n[a + 4] = P.n[a + 4] - sh2;
  }
  Q.validate(b);
  IdentityReport rep = make_report("conj-typeII-cd", P, b, tol);
  rep.conjecture = true;
  cplx pref = 1.0;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v)
      for (int l = 0; l < d; ++l) {
        cplx tl = ipow(P.t_cross, l);
        long nl = l * P.n_cross;
        pref *= gamma_rarefied(tl * P.t[u] * P.t[v], nl + P.n[u] + P.n[v] + P.eps, b) *
                gamma_rarefied(tl * P.t[u + 4] * P.t[v + 4],
                               nl + P.n[u + 4] + P.n[v + 4] + P.eps, b);
      }
  auto L = eval_V(P, b, g);
  auto R = eval_V(Q, b, g);
  rep.lhs = L.value;
  rep.rhs = pref * R.value;
  rep.grid_used = std::max(L.grid_used, R.grid_used);
  rep.rel_dev = ratio_dev(rep.lhs, rep.rhs);
  finish(rep, t0);
  rep.note = rep.pass ? "conjecture-consistent" : "conjecture deviation";
  return rep;
}

IdentityReport check_conj_AnAm(const BalancedParams& P, const Bases& b, const GridSpec& g,
                               double tol) {
  auto t0 = clock_type::now();
  if (P.kind != ParamKind::TypeI_An)
    throw domain_error("check_conj_AnAm expects an A-type pack");
  const int nr = P.rank;
  const int fam = static_cast<int>(P.t.size());
  const int mpow = fam - nr - 2;
  if (mpow < 1) throw domain_error("check_conj_AnAm needs product power >= 2");
  cplx tprod = 1.0, sprod = 1.0;
  for (int a = 0; a < fam; ++a) {
    tprod *= P.t[a];
    sprod *= P.s[a];
  }
  const cplx troot = std::pow(tprod, 1.0 / (mpow + 1));
  const cplx sroot = b.pq / troot;  // correlated root of the complementary product
  long nsum = 0;
  for (long na : P.n) nsum += na;
  const long delta = ((nsum + P.eps) % (mpow + 1) + (mpow + 1)) % (mpow + 1);
  const long big_n = (nsum + P.eps - delta) / (mpow + 1);
  BalancedParams Q = P;
  Q.rank = mpow;
  Q.eps = delta;
  for (int a = 0; a < fam; ++a) {
    Q.t[a] = troot / P.t[a];
    Q.n[a] = big_n - P.n[a];
    Q.s[a] = sroot / P.s[a];
    Q.k[a] = -big_n - P.k[a];
  }
  Q.validate(b);
  IdentityReport rep = make_report("conj-anam", P, b, tol);
  rep.conjecture = true;
  cplx pref = 1.0;
  for (int a = 0; a < fam; ++a)
    for (int c = 0; c < fam; ++c)
      pref *= gamma_rarefied(P.t[a] * P.s[c], P.n[a] + P.k[c], b);
  SumIntegralSpec specL{P, b, g, {}};
  SumIntegralSpec specR{Q, b, g, {}};
  auto L = eval_lhs(specL);
  auto R = eval_lhs(specR);
  rep.lhs = L.value;
  rep.rhs = pref * R.value;
  rep.grid_used = std::max(L.grid_used, R.grid_used);
  rep.rel_dev = ratio_dev(rep.lhs, rep.rhs);
  finish(rep, t0);
  rep.note = rep.pass ? "conjecture-consistent" : "conjecture deviation";
  return rep;
}

}  // namespace rehf
