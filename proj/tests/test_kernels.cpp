#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rehf/ellgamma.hpp"
#include "rehf/kernels.hpp"
#include "rehf/qseries.hpp"
#include "testutil.hpp"

using rehf::cplx;
using testutil::rel;

namespace {

const cplx kP{0.17, 0.06};
const cplx kQ{0.11, -0.08};

rehf::BalancedParams beta6_pack(const rehf::Bases& b, long eps) {
  rehf::BalancedParams P;
  P.kind = rehf::ParamKind::Beta6;
  P.eps = eps;
  P.t = {cplx(0.61, 0.12), cplx(0.42, -0.38), cplx(-0.55, 0.11), cplx(0.35, 0.43),
         cplx(0.62, 0.07)};
  cplx prod{1.0, 0.0};
  for (cplx v : P.t) prod *= v;
  P.t.push_back(b.pq / prod);
  P.n = {1, -2, 0, 2, -1};
  P.n.push_back(-3 * eps);
  return P;
}

rehf::BalancedParams v8_pack(const rehf::Bases& b, long eps) {
  rehf::BalancedParams P;
  P.kind = rehf::ParamKind::V8;
  P.eps = eps;
  P.t = {cplx(0.61, 0.12), cplx(0.42, -0.38), cplx(-0.55, 0.11), cplx(0.35, 0.43),
         cplx(0.62, 0.07), cplx(-0.38, -0.29), cplx(0.51, -0.21)};
  cplx prod{1.0, 0.0};
  for (cplx v : P.t) prod *= v;
  P.t.push_back(b.pq * b.pq / prod);
  P.n = {1, -2, 0, 2, -1, 1, 0};
  P.n.push_back(-1 - 4 * eps);
  return P;
}

rehf::BalancedParams typeI_rank2_pack(const rehf::Bases& b, long eps) {
  rehf::BalancedParams P;
  P.kind = rehf::ParamKind::TypeI_Cn;
  P.rank = 2;
  P.eps = eps;
  P.t = {cplx(0.71, 0.12), cplx(0.52, -0.48), cplx(-0.65, 0.11), cplx(0.45, 0.53),
         cplx(0.72, 0.07), cplx(-0.48, -0.39), cplx(0.61, -0.21)};
  cplx prod{1.0, 0.0};
  for (cplx v : P.t) prod *= v;
  P.t.push_back(b.pq / prod);
  P.n = {1, -2, 0, 2, -1, 1, 0};
  P.n.push_back(-1 - 4 * eps);
  return P;
}

rehf::BalancedParams typeII_d2_pack(const rehf::Bases& b, long eps) {
  rehf::BalancedParams P;
  P.kind = rehf::ParamKind::TypeII_Cn;
  P.rank = 2;
  P.eps = eps;
  P.t_cross = cplx(0.45, 0.10);
  P.n_cross = 1;
  P.t = {cplx(0.71, 0.12), cplx(0.52, -0.48), cplx(-0.65, 0.11), cplx(0.45, 0.53),
         cplx(0.72, 0.07)};
  cplx prod = P.t_cross * P.t_cross;
  for (cplx v : P.t) prod *= v;
  P.t.push_back(b.pq / prod);
  P.n = {1, -2, 0, 2, -1};
  P.n.push_back(-2 - 3 * eps);
  return P;
}

rehf::BalancedParams an_pack(const rehf::Bases& b, long eps) {
  rehf::BalancedParams P;
  P.kind = rehf::ParamKind::TypeI_An;
  P.rank = 1;
  P.eps = eps;
  P.t = {cplx(0.71, 0.12), cplx(0.52, -0.48), cplx(-0.65, 0.11), cplx(0.45, 0.53)};
  P.n = {1, -1, 0, 2};
  P.s = {cplx(0.62, 0.07), cplx(-0.48, -0.39), cplx(0.61, -0.21)};
  P.k = {0, 1, -2};
  cplx prod{1.0, 0.0};
  for (cplx v : P.t) prod *= v;
  for (cplx v : P.s) prod *= v;
  P.s.push_back(b.pq * b.pq / prod);
  P.k.push_back(-1);
  return P;
}

rehf::LatticePoint pt1(cplx z, long m) { return {{z}, {m}}; }

}  // namespace

TEST_CASE("balanced parameter validation") {
  rehf::Bases b(kP, kQ, 2);
  auto P = beta6_pack(b, 1);
  CHECK_NOTHROW(P.validate(b));

  auto bad = P;
  bad.t[0] *= 1.001;
  CHECK_THROWS_AS(bad.validate(b), rehf::balance_error);

  bad = P;
  bad.n[2] += 1;
  CHECK_THROWS_AS(bad.validate(b), rehf::balance_error);

  bad = P;
  bad.t[1] /= std::abs(bad.t[1]);  // push onto the unit circle
  bad.t[3] *= std::abs(P.t[1]);
  CHECK_THROWS_AS(bad.validate(b), rehf::balance_error);

  bad = P;
  bad.eps = 2;
  CHECK_THROWS_AS(bad.validate(b), rehf::balance_error);

  CHECK_NOTHROW(v8_pack(b, 0).validate(b));
  CHECK_NOTHROW(typeI_rank2_pack(b, 1).validate(b));
  CHECK_NOTHROW(typeII_d2_pack(b, 0).validate(b));
  CHECK_NOTHROW(an_pack(b, 1).validate(b));

  auto an_bad = an_pack(b, 1);
  an_bad.eps = 2;  // above the rank
  CHECK_THROWS_AS(an_bad.validate(b), rehf::balance_error);
}

TEST_CASE("beta kernel m-periodicity and reflection") {
  const cplx z = std::polar(1.0, 0.8);
  for (int r : {1, 2, 3}) {
    rehf::Bases b(kP, kQ, r);
    for (long eps : {0L, 1L}) {
      auto P = beta6_pack(b, eps);
      P.validate(b);
      for (long m : {0L, 1L, 2L}) {
        cplx base = rehf::kernel_beta(pt1(z, m), P, b);
        cplx shifted = rehf::kernel_beta(pt1(z, m + r), P, b);
        CHECK(rel(shifted, base) < 5e-10);
        cplx refl = rehf::kernel_beta(pt1(1.0 / z, m - eps), P, b);
        cplx neg = rehf::kernel_beta(pt1(z, -m), P, b);
        CHECK(rel(neg, refl) < 1e-13);
      }
    }
  }
}

TEST_CASE("even eps folds into the indices") {
  rehf::Bases b(kP, kQ, 3);
  auto P0 = beta6_pack(b, 0);
  auto P2 = P0;
  P2.eps = 2;
  for (auto& v : P2.n) v -= 1;
  const cplx z = std::polar(1.0, -1.1);
  for (long m : {0L, 1L, 2L}) {
    cplx a = rehf::kernel_beta(pt1(z, m), P0, b);
    cplx c = rehf::kernel_beta(pt1(z, m - 1), P2, b);
    CHECK(rel(c, a) < 1e-15);
  }
}

TEST_CASE("classical beta integrand at r=1") {
  rehf::Bases b(kP, kQ, 1);
  auto P = beta6_pack(b, 0);
  const cplx z = std::polar(1.0, 2.3);
  cplx got = rehf::kernel_beta(pt1(z, 0), P, b);
  cplx want{1.0, 0.0};
  for (cplx t : P.t) want *= rehf::elliptic_gamma_pm(t, z, kP, kQ);
  want /= rehf::elliptic_gamma(z * z, kP, kQ) * rehf::elliptic_gamma(1.0 / (z * z), kP, kQ);
  CHECK(rel(got, want) < 1e-12);
}

TEST_CASE("shift coefficients h1 and h2") {
  const cplx z = std::polar(1.0, 0.65);
  for (int r : {1, 2, 3}) {
    rehf::Bases b(kP, kQ, r);
    for (long eps : {0L, 1L}) {
      auto P = beta6_pack(b, eps);
      for (long m : {0L, 1L}) {
        auto [h1, h2] = rehf::h_coefficients(z, m, P, b);

        cplx base = rehf::kernel_beta(pt1(z, m), P, b);
        cplx up = rehf::kernel_beta(pt1(kQ * z, m + 1), P, b);
        cplx dn = rehf::kernel_beta(pt1(kP * z, m - 1), P, b);
        CHECK(rel(dn / base, h1) < 1e-10);
        CHECK(rel(up / base, h2) < 1e-10);

        auto [h1s, unused1] = rehf::h_coefficients(b.q_r * z, m, P, b);
        auto [unused2, h2s] = rehf::h_coefficients(b.p_r * z, m, P, b);
        CHECK(rel(h1s, h1) < 1e-12);
        CHECK(rel(h2s, h2) < 1e-12);
      }
    }
  }
}

TEST_CASE("first order difference equations over a full base period") {
  const cplx z = std::polar(1.0, 1.35);
  for (int r : {1, 2, 3}) {
    rehf::Bases b(kP, kQ, r);
    for (long eps : {0L, 1L}) {
      auto P = beta6_pack(b, eps);
      const long m = 1;
      cplx base = rehf::kernel_beta(pt1(z, m), P, b);

      cplx acc{1.0, 0.0};
      for (long k = 0; k < r; ++k)
        acc *= rehf::h_coefficients(rehf::ipow(kP, k) * z, m - k, P, b).first;
      cplx lhs = rehf::kernel_beta(pt1(b.p_r * z, m), P, b);
      CHECK(rel(lhs, acc * base) < 1e-10);

      acc = cplx{1.0, 0.0};
      for (long k = 0; k < r; ++k)
        acc *= rehf::h_coefficients(rehf::ipow(kQ, k) * z, m + k, P, b).second;
      lhs = rehf::kernel_beta(pt1(b.q_r * z, m), P, b);
      CHECK(rel(lhs, acc * base) < 1e-10);
    }
  }
}

TEST_CASE("type I kernel of rank one matches the beta kernel") {
  rehf::Bases b(kP, kQ, 2);
  auto P = beta6_pack(b, 1);
  P.kind = rehf::ParamKind::TypeI_Cn;
  P.validate(b);
  const cplx z = std::polar(1.0, 0.4);
  cplx a = rehf::kernel_typeI_Cn(pt1(z, 1), P, b);
  cplx c = rehf::kernel_beta(pt1(z, 1), beta6_pack(b, 1), b);
  CHECK(rel(a, c) < 1e-15);
}

TEST_CASE("rank two type I kernel symmetry and periodicity") {
  rehf::LatticePoint pt{{std::polar(1.0, 0.8), std::polar(1.0, -1.9)}, {1, 0}};
  for (int r : {2, 3}) {
    rehf::Bases b(kP, kQ, r);
    for (long eps : {0L, 1L}) {
      auto P = typeI_rank2_pack(b, eps);
      P.validate(b);
      cplx base = rehf::kernel_typeI_Cn(pt, P, b);

      rehf::LatticePoint swapped{{pt.z[1], pt.z[0]}, {pt.m[1], pt.m[0]}};
      CHECK(rel(rehf::kernel_typeI_Cn(swapped, P, b), base) < 1e-13);

      for (std::size_t slot : {0u, 1u}) {
        auto moved = pt;
        moved.m[slot] += r;
        CHECK(rel(rehf::kernel_typeI_Cn(moved, P, b), base) < 5e-10);
      }
    }
  }
}

TEST_CASE("theta identity behind the type I evaluation") {
  std::mt19937_64 rng(0x5eed0001ull);
  auto unif = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  for (std::size_t rank : {1u, 2u}) {
    for (int draw = 0; draw < 50; ++draw) {
      const int r = 1 + draw % 3;
      const cplx q = std::polar(unif(0.45, 0.6), unif(-0.7, 0.7));
      const long eps = static_cast<long>(rng() % 2);
      std::vector<cplx> t(2 * rank + 3), z(rank);
      std::vector<long> nn(t.size()), mm(rank);
      for (auto& v : t) v = std::polar(unif(0.4, 0.85), unif(-3.1, 3.1));
      for (auto& v : z) v = std::polar(unif(0.85, 1.15), unif(-3.1, 3.1));
      for (auto& v : nn) v = static_cast<long>(rng() % 4) - 1;
      for (auto& v : mm) v = static_cast<long>(rng() % 4) - 1;
      double res = rehf::typeI_theta_identity_residual(t, nn, z, mm, eps, q, r);
      CHECK(res <= 1e-11);
    }
  }
}

TEST_CASE("type II cross factor pairs to one under parameter inversion") {
  const cplx zj = std::polar(1.0, 0.8);
  const cplx zk = std::polar(1.0, -1.9);
  for (int r : {1, 2, 3}) {
    rehf::Bases b(kP, kQ, r);
    const cplx t{0.45, 0.10};
    for (long eps : {0L, 1L}) {
      cplx a = rehf::typeII_cross(t, 1, zj, 1, zk, 0, eps, b);
      cplx c = rehf::typeII_cross(b.pq / t, -1, zj, 1, zk, 0, eps, b);
      CHECK(rel(a * c, cplx{1.0, 0.0}) < 1e-12);
    }
  }
}

TEST_CASE("type II kernel rank reductions and periodicity") {
  rehf::Bases b(kP, kQ, 2);

  auto P6 = beta6_pack(b, 1);
  P6.kind = rehf::ParamKind::TypeII_Cn;
  P6.t_cross = cplx(0.45, 0.10);
  P6.n_cross = 3;  // irrelevant at rank 1
  P6.validate(b);
  const cplx z = std::polar(1.0, 0.4);
  CHECK(rel(rehf::kernel_typeII(pt1(z, 1), P6, b),
            rehf::kernel_beta(pt1(z, 1), beta6_pack(b, 1), b)) < 1e-15);

  auto P8 = v8_pack(b, 0);
  P8.kind = rehf::ParamKind::TypeII_Cd_V;
  P8.t_cross = cplx(0.45, 0.10);
  P8.n_cross = -2;
  P8.validate(b);
  CHECK(rel(rehf::kernel_typeII(pt1(z, 1), P8, b),
            rehf::kernel_beta(pt1(z, 1), v8_pack(b, 0), b)) < 1e-15);

  rehf::LatticePoint pt{{std::polar(1.0, 0.8), std::polar(1.0, -1.9)}, {1, 0}};
  for (long eps : {0L, 1L}) {
    auto P = typeII_d2_pack(b, eps);
    P.validate(b);
    cplx base = rehf::kernel_typeII(pt, P, b);
    for (std::size_t slot : {0u, 1u}) {
      auto moved = pt;
      moved.m[slot] += b.r;
      CHECK(rel(rehf::kernel_typeII(moved, P, b), base) < 5e-10);
    }
    rehf::LatticePoint swapped{{pt.z[1], pt.z[0]}, {pt.m[1], pt.m[0]}};
    CHECK(rel(rehf::kernel_typeII(swapped, P, b), base) < 1e-13);
  }
}

TEST_CASE("A_n kernel against its unrolled rank-one form") {
  rehf::Bases b(kP, kQ, 2);
  for (long eps : {0L, 1L}) {
    auto P = an_pack(b, eps);
    P.validate(b);
    const cplx z = std::polar(1.0, 1.15);
    for (long m : {0L, 1L}) {
      cplx got = rehf::kernel_An(pt1(z, m), P, b);
      const cplx z2 = 1.0 / z;
      const long m2 = eps - m;
      cplx want{1.0, 0.0};
      for (std::size_t a = 0; a < P.t.size(); ++a) {
        want *= rehf::gamma_rarefied(P.t[a] * z, P.n[a] + m, b) *
                rehf::gamma_rarefied(P.s[a] / z, P.k[a] - m, b);
        want *= rehf::gamma_rarefied(P.t[a] * z2, P.n[a] + m2, b) *
                rehf::gamma_rarefied(P.s[a] / z2, P.k[a] - m2, b);
      }
      want /= rehf::gamma_rarefied(z / z2, m - m2, b) *
              rehf::gamma_rarefied(z2 / z, m2 - m, b);
      CHECK(rel(got, want) < 1e-13);
    }
  }
}

TEST_CASE("A_n kernel slot periodicity and base-period eps shift") {
  const cplx z = std::polar(1.0, 1.15);
  for (int r : {1, 2, 3}) {
    rehf::Bases b(kP, kQ, r);
    for (long eps : {0L, 1L}) {
      auto P = an_pack(b, eps);
      P.validate(b);
      for (long m : {0L, 1L}) {
        cplx base = rehf::kernel_An(pt1(z, m), P, b);
        cplx moved = rehf::kernel_An(pt1(z, m + r), P, b);
        CHECK(rel(moved, base) < 1e-12);
      }
    }
  }

  // at r=1 the weight is insensitive to a simultaneous unit shift of eps
  // by rank+1 and of every lattice index by one
  rehf::Bases b1(kP, kQ, 1);
  auto P = an_pack(b1, 0);
  auto Ps = P;
  Ps.eps = P.rank + 1;
  cplx a = rehf::kernel_An(pt1(z, 1), P, b1);
  cplx c = rehf::kernel_An(pt1(z, 2), Ps, b1);
  CHECK(rel(c, a) < 1e-13);
}

TEST_CASE("difference equation coefficient is elliptic in the parameters") {
  for (int r : {1, 2, 3}) {
    rehf::Bases b(kP, kQ, r);
    auto P = v8_pack(b, 0);
    const cplx p_eff = b.pq / b.q_r;
    cplx base = rehf::A_coefficient(P.t, p_eff, b.q_r);
    for (std::size_t a : {3u, 5u}) {
      for (std::size_t c : {4u, 7u}) {
        if (a == c) continue;
        auto t = P.t;
        t[a] *= b.q_r;
        t[c] /= b.q_r;
        CHECK(rel(rehf::A_coefficient(t, p_eff, b.q_r), base) < 1e-11);
      }
    }

    rehf::Truncation deep;
    deep.tail_threshold = 1e-25;
    deep.max_terms = 900;
    CHECK(rel(rehf::A_coefficient(P.t, p_eff, b.q_r, deep), base) < 1e-13);
  }

  // r = 1 pins the standard coefficient; independent inline evaluation.
  rehf::Bases b1(kP, kQ, 1);
  auto P = v8_pack(b1, 0);
  cplx got = rehf::A_coefficient(P.t, kP, kQ);
  const cplx t1 = P.t[0], t2 = P.t[1], t3 = P.t[2];
  auto th = [&](cplx x) { return rehf::theta(x, kQ); };
  cplx want = th(t1 / (kP * t3)) * th(t3 * t1) * th(t3 / t1) /
              (th(t1 / t2) * th(t2 / (kP * t1)) * th(t1 * t2 / kP));
  for (std::size_t a = 3; a < 8; ++a) want *= th(t2 * P.t[a] / kP) / th(t3 * P.t[a]);
  CHECK(rel(got, want) < 1e-14);
}

TEST_CASE("van Diejen coefficient closed form") {
  for (int r : {1, 2}) {
    rehf::Bases b(kP, kQ, r);
    auto P = v8_pack(b, 0);
    P.kind = rehf::ParamKind::TypeII_Cd_V;
    P.t_cross = cplx(0.45, 0.10);
    P.n_cross = -2;
    P.validate(b);

    const cplx x = std::polar(1.0, 0.95);
    cplx got = rehf::vandiejen_A(0, std::vector<cplx>{x}, false, P, b);
    cplx num{1.0, 0.0};
    for (std::size_t a = 0; a < 8; ++a)
      num *= rehf::theta(P.t[a] * rehf::ipow(kQ, -P.n[a]) * x, b.q_r);
    cplx want = num / (rehf::theta(x * x, b.q_r) *
                       rehf::theta(b.pq / b.q_r * x * x, b.q_r));
    CHECK(rel(got, want) < 1e-14);

    cplx inv = rehf::vandiejen_A(0, std::vector<cplx>{x}, true, P, b);
    cplx inv_direct = rehf::vandiejen_A(0, std::vector<cplx>{1.0 / x}, false, P, b);
    CHECK(rel(inv, inv_direct) < 1e-14);

    // rank 2: finite values at a generic interior point
    std::vector<cplx> w{std::polar(1.0, 0.95), std::polar(1.0, -0.55)};
    P.rank = 2;
    P.n_cross = 1;
    cplx prod = P.t_cross * P.t_cross;
    for (std::size_t a = 0; a + 1 < P.t.size(); ++a) prod *= P.t[a];
    P.t.back() = b.pq * b.pq / prod;
    P.n.back() = -2 * P.n_cross - 1;
    P.validate(b);
    for (std::size_t j : {0u, 1u}) {
      CHECK(rehf::is_finite(rehf::vandiejen_A(j, w, false, P, b)));
      CHECK(rehf::is_finite(rehf::vandiejen_A(j, w, true, P, b)));
    }
  }
}

TEST_CASE("gamma grid cache reproduces direct evaluation") {
  rehf::Bases b(kP, kQ, 2);
  auto P = beta6_pack(b, 1);
  const cplx z = std::polar(1.0, 0.8);
  const long m = 1;

  std::vector<cplx> args;
  std::vector<long> ks;
  for (std::size_t a = 0; a < P.t.size(); ++a) {
    args.push_back(P.t[a] * z);
    ks.push_back(P.n[a] + m + P.eps);
    args.push_back(P.t[a] / z);
    ks.push_back(P.n[a] - m);
  }
  // duplicate entries must be deduplicated
  args.push_back(args.front());
  ks.push_back(ks.front());

  rehf::GammaGridCache cache(b);
  cache.prefill(args, ks);
  CHECK(cache.size() == 12);

  cplx direct = rehf::kernel_beta(pt1(z, m), P, b);
  cplx cached = rehf::kernel_beta(pt1(z, m), P, b, &cache);
  CHECK(rel(cached, direct) < 1e-15);

  // miss falls back to direct evaluation
  cplx off = cache(cplx(0.3, 0.2), 5);
  CHECK(rel(off, rehf::gamma_rarefied(cplx(0.3, 0.2), 5, b)) < 1e-15);
}
