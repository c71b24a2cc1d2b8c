#pragma once

#include "rehf/common.hpp"
#include "rehf/errors.hpp"
#include "rehf/qseries.hpp"

namespace rehf {

// Base parameters (p, q, r) together with every derived constant that the
// rarefied gamma functions and kernels keep reusing. The three square roots
// are fixed once at construction: sqrt_pq and sqrt_p_over_q are principal,
// while sqrt_q_over_p is the exact reciprocal of sqrt_p_over_q rather than
// an independent principal root. That choice makes products of the two roots
// exactly 1 and keeps all monomial prefactors on one coherent branch.
struct Bases {
  cplx p{};
  cplx q{};
  int r = 1;

  cplx pq{};
  cplx p_r{};  // p^r
  cplx q_r{};  // q^r
  cplx sqrt_pq{};
  cplx sqrt_p_over_q{};
  cplx sqrt_q_over_p{};
  cplx poch_p_r{};  // (p^r; p^r)_inf
  cplx poch_q_r{};  // (q^r; q^r)_inf

  Bases() = default;
  Bases(cplx p_, cplx q_, int r_, Truncation tr = {});

  // p <-> q with the square roots carried over, not recomputed, so that
  // expressions mixing a Bases with its swap never straddle two branches.
  Bases swapped() const;
};

}  // namespace rehf
