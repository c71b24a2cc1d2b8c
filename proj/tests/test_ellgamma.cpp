#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <rehf/ellgamma.hpp>

#include "testutil.hpp"

using rehf::cplx;
using rehf::GammaEvalOptions;
using testutil::rel;

namespace {

GammaEvalOptions reference_path() {
  GammaEvalOptions o;
  o.fast_path = false;
  return o;
}

}  // namespace

TEST_CASE("dispatch agrees with the defining double product") {
  const cplx p{0.2, 0.0}, q{0.15, 0.1};
  // moduli chosen to exercise series, shift-reduction and inversion branches
  const cplx zs[] = {{0.5, 0.2},   {0.96, 0.1},  {1.4, -0.3},
                     {2.5, 0.0},   {0.04, 0.02}, {-0.7, 0.6},
                     {0.03, 0.0}};
  for (cplx z : zs) {
    cplx fast = rehf::elliptic_gamma(z, p, q);
    cplx slow = rehf::elliptic_gamma(z, p, q, reference_path());
    CHECK(rel(fast, slow) < 1e-12);
  }
}

TEST_CASE("frozen value") {
  cplx g = rehf::elliptic_gamma({0.4, 0.25}, {0.2, 0.0}, {0.15, 0.0});
  CHECK(rel(g, {1.4465269350537207389, 0.92926187120147896443}) < 1e-13);
}

TEST_CASE("normalization, symmetry and inversion") {
  const cplx p{0.23, 0.04}, q{0.11, -0.06};
  cplx spq = std::sqrt(p * q);
  CHECK(rel(rehf::elliptic_gamma(spq, p, q), {1.0, 0.0}) < 1e-13);
  const cplx zs[] = {{0.8, 0.3}, {1.2, -0.5}, {0.35, 0.0}};
  for (cplx z : zs) {
    CHECK(rel(rehf::elliptic_gamma(z, p, q), rehf::elliptic_gamma(z, q, p)) < 1e-13);
    cplx prod = rehf::elliptic_gamma(z, p, q) * rehf::elliptic_gamma(p * q / z, p, q);
    CHECK(rel(prod, {1.0, 0.0}) < 1e-12);
  }
}

TEST_CASE("first order shift equations") {
  const cplx p{0.2, 0.0}, q{0.17, 0.05};
  const cplx zs[] = {{0.75, 0.1}, {1.1, -0.25}};
  for (cplx z : zs) {
    cplx g = rehf::elliptic_gamma(z, p, q);
    CHECK(rel(rehf::elliptic_gamma(q * z, p, q), rehf::theta(z, p) * g) < 1e-12);
    CHECK(rel(rehf::elliptic_gamma(p * z, p, q), rehf::theta(z, q) * g) < 1e-12);
  }
}

TEST_CASE("elliptic Pochhammer as a gamma ratio") {
  const cplx p{0.2, 0.0}, q{0.17, 0.05}, z{0.6, 0.2};
  for (long m : {-3L, -1L, 1L, 2L, 4L}) {
    cplx ratio = rehf::elliptic_gamma(z * rehf::ipow(q, m), p, q) /
                 rehf::elliptic_gamma(z, p, q);
    CHECK(rel(rehf::elliptic_pochhammer(z, m, p, q), ratio) < 1e-12);
  }
}

TEST_CASE("pole proximity is reported, not returned") {
  const cplx p{0.2, 0.0}, q{0.15, 0.0};
  CHECK_THROWS_AS((void)rehf::elliptic_gamma({1.0, 0.0}, p, q), rehf::pole_error);
  CHECK_THROWS_AS((void)rehf::elliptic_gamma(1.0 / p, p, q), rehf::pole_error);
  CHECK_THROWS_AS((void)rehf::elliptic_gamma({0.0, 0.0}, p, q), rehf::domain_error);
  CHECK_THROWS_AS((void)rehf::elliptic_gamma({0.5, 0.0}, {1.1, 0.0}, q), rehf::domain_error);
}

TEST_CASE("second order gamma satisfies its shift equation") {
  const cplx p{0.2, 0.0}, q{0.15, 0.08}, t{0.1, -0.05};
  const cplx zs[] = {{0.7, 0.2}, {1.3, -0.4}};
  for (cplx z : zs) {
    // Gamma(qz; p,q,t) = Gamma(z; p,t) Gamma(z; p,q,t), plus base permutations
    cplx g2 = rehf::elliptic_gamma2(z, p, q, t);
    CHECK(rel(rehf::elliptic_gamma2(q * z, p, q, t),
              rehf::elliptic_gamma(z, p, t) * g2) < 1e-12);
    CHECK(rel(rehf::elliptic_gamma2(p * z, p, q, t),
              rehf::elliptic_gamma(z, q, t) * g2) < 1e-12);
    CHECK(rel(rehf::elliptic_gamma2(t * z, p, q, t),
              rehf::elliptic_gamma(z, p, q) * g2) < 1e-12);
    // inversion: Gamma(pqtz; p,q,t) = Gamma(1/z; p,q,t)
    CHECK(rel(rehf::elliptic_gamma2(p * q * t * z, p, q, t),
              rehf::elliptic_gamma2(1.0 / z, p, q, t)) < 1e-12);
  }
}

TEST_CASE("classical log gamma") {
  struct Known {
    cplx z, gamma;
  } knowns[] = {
      {{1.0, 1.0}, {0.49801566811835604271, -0.15494982830181068512}},
      {{-2.5, 0.0}, {-0.94530872048294188123, 0.0}},
      {{0.5, 3.0}, {0.02144567055243064606, 0.0068653648372616779142}},
      {{5.0, 0.0}, {24.0, 0.0}},
  };
  for (const auto& k : knowns)
    CHECK(rel(std::exp(rehf::log_gamma_classical(k.z)), k.gamma) < 1e-12);
  // recurrence on a tall vertical line, where the integrand evaluations live
  for (double y : {8.0, 25.0, 47.0}) {
    cplx z{0.3, y};
    cplx lhs = rehf::log_gamma_classical(z + 1.0) - rehf::log_gamma_classical(z);
    CHECK(std::abs(std::exp(lhs) - z) / std::abs(z) < 1e-11);
  }
  CHECK_THROWS_AS((void)rehf::log_gamma_classical({-3.0, 0.0}), rehf::pole_error);
}

TEST_CASE("residue of the unit pole") {
  // (1-z) Gamma(z; p,q) -> 1/((p;p)(q;q)) as z -> 1, deviation O(h)
  double d6 = rehf::residue_limit_check({0.2, 0.0}, {0.15, 0.1}, 1e-6);
  double d7 = rehf::residue_limit_check({0.2, 0.0}, {0.15, 0.1}, 1e-7);
  CHECK(d6 < 1e-4);
  CHECK(d7 < 0.2 * d6);  // first-order rate
}
