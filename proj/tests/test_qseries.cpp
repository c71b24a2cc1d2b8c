#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>
#include <vector>

#include <rehf/qseries.hpp>

#include "testutil.hpp"

using rehf::cplx;
using rehf::Truncation;
using testutil::rel;

namespace {

// Brute-force partial product at twice the library's default depth.
cplx qpoch_oracle(cplx z, cplx p, int terms = 800) {
  cplx acc{1.0, 0.0};
  cplx zp = z;
  for (int j = 0; j < terms; ++j) {
    acc *= (1.0 - zp);
    zp *= p;
  }
  return acc;
}

}  // namespace

TEST_CASE("qpochhammer_inf against deep partial products") {
  const cplx zs[] = {{0.5, 0.0}, {0.3, 0.4}, {-0.8, 0.2}, {1.7, -0.6}, {0.0, 0.0}};
  const cplx ps[] = {{0.3, 0.0}, {0.15, 0.1}, {-0.25, 0.05}};
  for (cplx p : ps)
    for (cplx z : zs)
      CHECK(rel(rehf::qpochhammer_inf(z, p), qpoch_oracle(z, p)) < 1e-14);
}

TEST_CASE("qpochhammer_inf special points and frozen value") {
  CHECK(std::abs(rehf::qpochhammer_inf({0.0, 0.0}, {0.3, 0.0}) - 1.0) == 0.0);
  CHECK(std::abs(rehf::qpochhammer_inf({1.0, 0.0}, {0.3, 0.0})) == 0.0);
  // Euler function at 0.1, reference value from 30-digit arithmetic.
  CHECK(rel(rehf::qpochhammer_inf({0.1, 0.0}, {0.1, 0.0}), {0.890010099998999, 0.0}) < 1e-14);
}

TEST_CASE("qpochhammer_inf rejects bad bases") {
  CHECK_THROWS_AS((void)rehf::qpochhammer_inf({0.5, 0.0}, {1.0, 0.0}), rehf::domain_error);
  CHECK_THROWS_AS((void)rehf::qpochhammer_inf({0.5, 0.0}, {0.9, 0.7}), rehf::domain_error);
  Truncation tight;
  tight.max_terms = 3;
  CHECK_THROWS_AS((void)rehf::qpochhammer_inf({0.5, 0.0}, {0.9, 0.0}, tight),
                  rehf::convergence_error);
}

TEST_CASE("theta Laurent expansion oracle") {
  // (p;p)_inf theta(z;p) = sum_n (-1)^n p^{n(n-1)/2} z^n over all integers n.
  const cplx ps[] = {{0.2, 0.0}, {0.12, 0.08}};
  const cplx zs[] = {{0.3, 0.1}, {1.4, -0.7}, {-0.5, 0.3}};
  for (cplx p : ps)
    for (cplx z : zs) {
      cplx sum{0.0, 0.0};
      for (int n = -40; n <= 40; ++n) {
        long long e = static_cast<long long>(n) * (n - 1) / 2;
        double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        sum += sgn * rehf::ipow(p, e) * rehf::ipow(z, n);
      }
      cplx lhs = rehf::qpochhammer_inf(p, p) * rehf::theta(z, p);
      CHECK(rel(lhs, sum) < 1e-13);
    }
  CHECK(rel(rehf::theta({0.3, 0.1}, {0.2, 0.0}),
            {0.23503793046304369533, 0.086076510686585806507}) < 1e-14);
}

TEST_CASE("theta symmetry and quasiperiodicity") {
  const cplx p{0.18, 0.05};
  const cplx zs[] = {{0.7, 0.2}, {1.1, -0.4}, {-0.35, 0.6}};
  for (cplx z : zs) {
    CHECK(rel(rehf::theta(1.0 / z, p), -rehf::theta(z, p) / z) < 1e-13);
    CHECK(rel(rehf::theta(p / z, p), rehf::theta(z, p)) < 1e-13);
    for (int k = -2; k <= 2; ++k) {
      cplx lhs = rehf::theta(rehf::ipow(p, k) * z, p);
      cplx rhs = rehf::ipow(-z, -k) * rehf::ipow(p, -static_cast<long long>(k) * (k - 1) / 2) *
                 rehf::theta(z, p);
      CHECK(rel(lhs, rhs) < 1e-12);
    }
  }
  CHECK(std::abs(rehf::theta({1.0, 0.0}, p)) < 1e-14);
  CHECK_THROWS_AS((void)rehf::theta({0.0, 0.0}, p), rehf::domain_error);
}

TEST_CASE("theta addition law") {
  // theta(x w^±, y v^±) - theta(x v^±, y w^±) = (y/w) theta(x y^±, w v^±)
  const cplx p{0.15, 0.0};
  const cplx x{0.8, 0.1}, y{0.5, -0.3}, w{1.2, 0.2}, v{0.9, 0.45};
  cplx lhs = rehf::theta_pm(x, w, p) * rehf::theta_pm(y, v, p) -
             rehf::theta_pm(x, v, p) * rehf::theta_pm(y, w, p);
  cplx rhs = (y / w) * rehf::theta_pm(x, y, p) * rehf::theta_pm(w, v, p);
  CHECK(rel(lhs, rhs) < 1e-13);
}

TEST_CASE("theta_product conventions") {
  const cplx p{0.2, 0.0};
  CHECK(rehf::theta_product({}, p) == cplx{1.0, 0.0});
  const cplx args[] = {{0.4, 0.2}, {1.3, -0.1}, {0.7, 0.0}};
  cplx direct = rehf::theta(args[0], p) * rehf::theta(args[1], p) * rehf::theta(args[2], p);
  CHECK(rel(rehf::theta_product(args, p), direct) < 1e-15);
}

TEST_CASE("elliptic_pochhammer both directions") {
  const cplx p{0.2, 0.0}, q{0.15, 0.1}, x{0.6, 0.3};
  CHECK(rehf::elliptic_pochhammer(x, 0, p, q) == cplx{1.0, 0.0});
  for (long n = 1; n <= 5; ++n) {
    cplx fwd{1.0, 0.0};
    for (long j = 0; j < n; ++j) fwd *= rehf::theta(x * rehf::ipow(q, j), p);
    CHECK(rel(rehf::elliptic_pochhammer(x, n, p, q), fwd) < 1e-13);
    cplx bwd{1.0, 0.0};
    for (long j = 1; j <= n; ++j) bwd *= rehf::theta(x * rehf::ipow(q, -j), p);
    CHECK(rel(rehf::elliptic_pochhammer(x, -n, p, q), 1.0 / bwd) < 1e-13);
  }
  // one-step recursion
  for (long n : {-3L, -1L, 0L, 2L, 4L}) {
    cplx step = rehf::elliptic_pochhammer(x, n, p, q) * rehf::theta(x * rehf::ipow(q, n), p);
    CHECK(rel(rehf::elliptic_pochhammer(x, n + 1, p, q), step) < 1e-13);
  }
}

TEST_CASE("elliptic_pochhammer reports vanishing denominators") {
  const cplx p{0.2, 0.0}, q{0.3, 0.0};
  // x q^{-1} = 1 makes the n = -1 denominator theta vanish
  CHECK_THROWS_AS((void)rehf::elliptic_pochhammer(q, -1, p, q), rehf::pole_error);
}

TEST_CASE("pairwise_sum matches extended-precision accumulation") {
  std::mt19937_64 gen(20260814ULL);
  std::vector<cplx> terms(10000);
  long double re = 0.0L, im = 0.0L;
  for (auto& t : terms) {
    double a = static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    double b = static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    t = {a, b};
    re += a;
    im += b;
  }
  cplx s = rehf::pairwise_sum(terms);
  CHECK(std::abs(s.real() - static_cast<double>(re)) < 1e-12);
  CHECK(std::abs(s.imag() - static_cast<double>(im)) < 1e-12);
  CHECK(rehf::pairwise_sum(terms) == s);  // bitwise repeatable
}

TEST_CASE("parallel_for visits each index once, any thread count") {
  const std::size_t n = 10000;
  for (int jobs : {1, 3, 8}) {
    std::vector<int> hits(n, 0);
    rehf::parallel_for(
        n, [&](std::size_t lo, std::size_t hi) {
          for (std::size_t i = lo; i < hi; ++i) hits[i] += 1;
        },
        jobs);
    CHECK(std::count(hits.begin(), hits.end(), 1) == static_cast<long>(n));
  }
}
