#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rehf/bases.hpp"
#include "rehf/ellgamma.hpp"
#include "rehf/rargamma.hpp"

namespace rehf {

enum class ParamKind {
  Beta6,             // 6 parameters, rank 1
  TypeI_Cn,          // 2n+4 parameters, rank n
  TypeII_Cn,         // 6 parameters + cross pair, rank d
  V8,                // 8 parameters, rank 1
  TypeII_Cd_V,       // 8 parameters + cross pair, rank d
  TypeI_Cd_general,  // 2d+2m+4 parameters, rank d
  TypeI_An,          // two families of n+m+2 parameters, rank n
};

const char* to_string(ParamKind kind);

// One balanced parameter pack: continuous parameters t_a paired with integer
// indices n_a, the parity flag eps, and (per family) the type II cross pair
// or the second A_n family (s_a, k_a). validate() enforces the shape, the
// |t_a| < 1 window, and the balancing products/sums for the given bases;
// kernel functions assume a validated pack and do not re-check.
struct BalancedParams {
  ParamKind kind = ParamKind::Beta6;
  std::vector<cplx> t;
  std::vector<long> n;
  long eps = 0;
  int rank = 1;

  cplx t_cross{};
  long n_cross = 0;

  std::vector<cplx> s;
  std::vector<long> k;

  void validate(const Bases& b) const;
};

// Evaluation point of a rank-n kernel: n torus (or near-torus) coordinates
// z_j with their integer lattice labels m_j.
struct LatticePoint {
  std::vector<cplx> z;
  std::vector<long> m;
};

// Memoized gamma_rarefied values keyed by the exact multiplicative argument
// and the integer index. Built once with prefill (parallel), then read-only:
// lookups never insert, and a miss falls back to direct evaluation, so
// concurrent kernel evaluation needs no locking.
class GammaGridCache {
 public:
  explicit GammaGridCache(const Bases& b, GammaEvalOptions opts = {});

  // Evaluates gamma_rarefied(args[i], ks[i]) for all i (duplicates are
  // computed once) and stores the results.
  void prefill(std::span<const cplx> args, std::span<const long> ks, int jobs = 0);

  cplx operator()(cplx arg, long k) const;
  std::size_t size() const { return table_.size(); }

 private:
  struct Key {
    std::uint64_t re = 0;
    std::uint64_t im = 0;
    long k = 0;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const;
  };
  static Key make_key(cplx arg, long k);

  const Bases* bases_;
  GammaEvalOptions opts_;
  std::unordered_map<Key, cplx, KeyHash> table_;
};

// Rank-1 beta kernel (6 or 8 parameters):
//   prod_a Gamma(t_a z, n_a + m + eps) Gamma(t_a / z, n_a - m)
//     / (Gamma(z^2, 2m + eps) Gamma(z^-2, -(2m + eps))),
// with the denominator realized through its entire reciprocal, so only
// genuine numerator poles can throw.
cplx kernel_beta(const LatticePoint& pt, const BalancedParams& P, const Bases& b,
                 const GammaGridCache* cache = nullptr);

// Type I kernel of rank n >= 1 (families Beta6, V8, TypeI_Cn,
// TypeI_Cd_general). Cross terms for j < k:
//   1 / (Gamma(z_j z_k, m_j + m_k + eps) Gamma(z_j / z_k, m_j - m_k)
//        Gamma(z_k / z_j, m_k - m_j) Gamma(1/(z_j z_k), -(m_j + m_k + eps))),
// times the rank-1 factor for every variable.
cplx kernel_typeI_Cn(const LatticePoint& pt, const BalancedParams& P, const Bases& b,
                     const GammaGridCache* cache = nullptr);

// Numerator cross factor of the type II kernels:
//   Gamma(t z_j z_k, n + m_j + m_k + eps) Gamma(t z_j / z_k, n + m_j - m_k)
//   Gamma(t z_k / z_j, n - m_j + m_k) Gamma(t / (z_j z_k), n - m_j - m_k - eps).
cplx typeII_cross(cplx t, long n, cplx zj, long mj, cplx zk, long mk, long eps,
                  const Bases& b, const GammaGridCache* cache = nullptr);

// Type II kernel (TypeII_Cn with 6 parameters, TypeII_Cd_V with 8): the type I
// structure with every j < k pair additionally weighted by typeII_cross.
cplx kernel_typeII(const LatticePoint& pt, const BalancedParams& P, const Bases& b,
                   const GammaGridCache* cache = nullptr);

// A_n kernel on the constrained torus: the point carries z_1..z_n, m_1..m_n
// and the kernel appends z_{n+1} = 1/(z_1...z_n), m_{n+1} = eps - sum m_j:
//   prod_{j=1}^{n+1} prod_a Gamma(t_a z_j, n_a + m_j) Gamma(s_a / z_j, k_a - m_j)
//     / prod_{i<j} Gamma(z_i / z_j, m_i - m_j) Gamma(z_j / z_i, m_j - m_i).
cplx kernel_An(const LatticePoint& pt, const BalancedParams& P, const Bases& b,
               const GammaGridCache* cache = nullptr);

// Kernel dispatch on P.kind.
cplx kernel_value(const LatticePoint& pt, const BalancedParams& P, const Bases& b,
                  const GammaGridCache* cache = nullptr);

// Lattice rank of the kernel selected by P.
int kernel_rank(const BalancedParams& P);

// Shift coefficients (h1, h2) of the rank-1 beta kernel, defined by
//   kernel(p z, m - 1) = h1(z, m) kernel(z, m),
//   kernel(q z, m + 1) = h2(z, m) kernel(z, m).
// Under the balancing condition h1 is elliptic with multiplier q^r in z and
// h2 with multiplier p^r.
std::pair<cplx, cplx> h_coefficients(cplx z, long m, const BalancedParams& P,
                                     const Bases& b, Truncation tr = {});

// Theta-ratio coefficient of the rarefied hypergeometric difference equation.
// p is the effective shift base p q^{1-r} (the plain base when r = 1) and qr
// is q^r; the value is elliptic with multiplier qr in every t_a once
// prod t_a = (pq)^2 is imposed.
cplx A_coefficient(std::span<const cplx> t, cplx p, cplx qr, Truncation tr = {});

// Coefficient A_j of the van Diejen type difference operator at the point w
// (w already carries the q^{-m} lattice shifts; inverted evaluates A_j at the
// elementwise inverse vector). P must be a TypeII_Cd_V pack; j is 0-based.
cplx vandiejen_A(std::size_t j, std::span<const cplx> w, bool inverted,
                 const BalancedParams& P, const Bases& b, Truncation tr = {});

// Relative residual of the theta identity behind the type I C_n evaluation:
// t and nn hold the 2n+3 free parameters, z and mm the n lattice coordinates.
// All thetas live at base q^r; an exact implementation drives this to
// rounding level for every admissible draw.
double typeI_theta_identity_residual(std::span<const cplx> t, std::span<const long> nn,
                                     std::span<const cplx> z, std::span<const long> mm,
                                     long eps, cplx q, int r, Truncation tr = {});

}  // namespace rehf
