#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "rehf/bases.hpp"
#include "rehf/kernels.hpp"
#include "rehf/quadrature.hpp"

namespace rehf {

struct SumIntegralSpec {
  BalancedParams params;
  Bases bases;
  GridSpec grid;
  // Inclusive per-dimension windows for the discrete sum; empty means 0..r-1
  // in every dimension. Each window must span exactly r consecutive values
  // (the sum is window-shift invariant, so r values always suffice). For the
  // A_n kernel the extra constrained slot is derived, never ranged.
  std::vector<std::pair<long, long>> m_range;
};

// Normalized sum-integral: the grid average realizes (1/2pi i) dz/z per
// dimension, and the assembly multiplies (p^r;p^r)(q^r;q^r)/2 per dimension
// and 1/n! for the C-type kernels of rank n. The A_n kernel instead carries
// (p^r;p^r)(q^r;q^r) per dimension and 1/(n+1)!. history reports the
// refinement of the largest |term| in the m-sum.
SumIntegralResult eval_lhs(const SumIntegralSpec& spec);

// Closed-form product sides (Beta6, TypeI_Cn, TypeII_Cn).
cplx eval_rhs(const BalancedParams& P, const Bases& b, Truncation tr = {});
cplx eval_rhs(const SumIntegralSpec& spec);

// Individual m-terms of a rank-1 sum over the default window 0..r-1, with
// the assembly normalization included, so their plain sum is eval_lhs.
std::vector<cplx> m_term_values(const SumIntegralSpec& spec);

// Recombination of c_0..c_{r-1} using the reflection symmetry of the weight;
// equals the plain sum whenever that symmetry holds.
cplx fold_m_terms(std::span<const cplx> c, long eps, int r);

SumIntegralResult eval_V(const BalancedParams& P, const Bases& b, const GridSpec& grid);

using LatticeFn = std::function<cplx(const LatticePoint&)>;

// Finite-difference operator action at a point: sum over j of
// A_j(w) (f(.. p z_j .., m_j - 1) - f) + A_j(1/w) (f(.. z_j / p .., m_j + 1) - f)
// with w_l = z_l q^{-m_l}. Requires TypeII_Cd_V parameters of rank d.
cplx apply_vandiejen(const LatticeFn& f, const LatticePoint& pt, const BalancedParams& P,
                     const Bases& b);

// Normalized sum-integral of weight * f * g; the weight must be TypeII_Cd_V
// with eps = 0.
SumIntegralResult inner_product(const LatticeFn& f, const LatticeFn& g,
                                const BalancedParams& P, const Bases& b,
                                const GridSpec& grid);

}  // namespace rehf
