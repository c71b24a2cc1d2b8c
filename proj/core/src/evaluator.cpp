#include "rehf/evaluator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rehf/errors.hpp"
#include "rehf/rargamma.hpp"

namespace rehf {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<std::pair<long, long>> resolve_windows(const SumIntegralSpec& spec, int rank) {
  const long r = spec.bases.r;
  if (spec.m_range.empty())
    return std::vector<std::pair<long, long>>(static_cast<std::size_t>(rank), {0L, r - 1});
  if (static_cast<int>(spec.m_range.size()) != rank)
    throw domain_error("m_range length must equal the kernel rank");
  for (auto [lo, hi] : spec.m_range)
    if (hi - lo + 1 != r) throw domain_error("each m window must span exactly r values");
  return spec.m_range;
}

cplx assembly_norm(const BalancedParams& P, const Bases& b, int rank) {
  cplx per_dim = b.poch_p_r * b.poch_q_r;
  double denom;
  if (P.kind == ParamKind::TypeI_An) {
    denom = factorial(rank + 1);
  } else {
    per_dim *= 0.5;
    denom = factorial(rank);
  }
  cplx norm{1.0, 0.0};
  for (int i = 0; i < rank; ++i) norm *= per_dim;
  return norm / denom;
}

// Argument enumeration mirrors the kernel loops expression for expression so
// the bit-exact cache keys match; a mismatch only costs a direct evaluation.
void prefill_pointwise(GammaGridCache& cache, std::span<const cplx> nodes,
                       std::span<const long> ms, const BalancedParams& P) {
  std::vector<cplx> args;
  std::vector<long> ks;
  const bool an = P.kind == ParamKind::TypeI_An;
  args.reserve(nodes.size() * ms.size() * P.t.size() * (an ? 4 : 2));
  ks.reserve(args.capacity());
  for (cplx node : nodes) {
    for (long m : ms) {
      if (an) {
        cplx zprod{1.0, 0.0};
        zprod *= node;
        const cplx z2 = 1.0 / zprod;
        const long m2 = P.eps - m;
        for (std::size_t a = 0; a < P.t.size(); ++a) {
          args.push_back(P.t[a] * node);
          ks.push_back(P.n[a] + m);
          args.push_back(P.s[a] / node);
          ks.push_back(P.k[a] - m);
          args.push_back(P.t[a] * z2);
          ks.push_back(P.n[a] + m2);
          args.push_back(P.s[a] / z2);
          ks.push_back(P.k[a] - m2);
        }
      } else {
        for (std::size_t a = 0; a < P.t.size(); ++a) {
          args.push_back(P.t[a] * node);
          ks.push_back(P.n[a] + m + P.eps);
          args.push_back(P.t[a] / node);
          ks.push_back(P.n[a] - m);
        }
      }
    }
  }
  cache.prefill(args, ks);
}

struct TermResult {
  SumIntegralResult integral;
  std::vector<long> m;
};

SumIntegralResult assemble(const SumIntegralSpec& spec, const LatticeFn* extra) {
  const auto start = std::chrono::steady_clock::now();
  spec.params.validate(spec.bases);
  const BalancedParams& P = spec.params;
  const Bases& b = spec.bases;
  const int rank = kernel_rank(P);
  if (rank > 2) throw domain_error("sum-integrals are implemented for rank 1 and 2");
  const auto windows = resolve_windows(spec, rank);
  GridSpec grid = spec.grid;
  grid.rank = rank;

  std::vector<TermResult> terms;
  if (rank == 1) {
    for (long m = windows[0].first; m <= windows[0].second; ++m) {
      const long ms[1] = {m};
      BatchFn1 batch = [&](std::span<const cplx> nodes, std::span<cplx> out) {
        GammaGridCache cache(b);
        prefill_pointwise(cache, nodes, ms, P);
        parallel_for(nodes.size(), [&](std::size_t lo, std::size_t hi) {
          for (std::size_t i = lo; i < hi; ++i) {
            LatticePoint pt{{nodes[i]}, {m}};
            cplx v = kernel_value(pt, P, b, &cache);
            if (extra) v *= (*extra)(pt);
            out[i] = v;
          }
        });
      };
      terms.push_back({torus_integral(batch, grid), {m}});
    }
  } else {
    for (long m1 = windows[0].first; m1 <= windows[0].second; ++m1)
      for (long m2 = windows[1].first; m2 <= windows[1].second; ++m2) {
        const long ms[2] = {m1, m2};
        BatchFn2 batch = [&](std::span<const cplx> nodes, std::span<cplx> out) {
          GammaGridCache cache(b);
          prefill_pointwise(cache, nodes, ms, P);
          const std::size_t n = nodes.size();
          parallel_for(n * n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t idx = lo; idx < hi; ++idx) {
              LatticePoint pt{{nodes[idx / n], nodes[idx % n]}, {m1, m2}};
              cplx v = kernel_value(pt, P, b, &cache);
              if (extra) v *= (*extra)(pt);
              out[idx] = v;
            }
          });
        };
        terms.push_back({torus_integral_2d(batch, grid), {m1, m2}});
      }
  }

  SumIntegralResult total;
  cplx sum{};
  double err_abs = 0.0;
  std::size_t lead = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i].integral;
    sum += t.value;
    err_abs += t.est_rel_error * std::abs(t.value);
    total.grid_used = std::max(total.grid_used, t.grid_used);
    total.wall_ms += t.wall_ms;
    if (std::abs(t.value) > std::abs(terms[lead].integral.value)) lead = i;
  }
  total.value = sum * assembly_norm(P, b, rank);
  const double scale = std::abs(sum);
  total.est_rel_error = scale > 0 ? err_abs / scale : err_abs;
  total.m_terms = static_cast<long>(terms.size());
  total.history = terms[lead].integral.history;
  total.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return total;
}

}  // namespace

SumIntegralResult eval_lhs(const SumIntegralSpec& spec) { return assemble(spec, nullptr); }

cplx eval_rhs(const BalancedParams& P, const Bases& b, Truncation tr) {
  GammaEvalOptions opts;
  opts.truncation = tr;
  auto G = [&](cplx z, long k) { return gamma_rarefied(z, k, b, opts); };
  switch (P.kind) {
    case ParamKind::Beta6:
    case ParamKind::TypeI_Cn: {
      cplx val{1.0, 0.0};
      for (std::size_t a = 0; a < P.t.size(); ++a)
        for (std::size_t c = a + 1; c < P.t.size(); ++c)
          val *= G(P.t[a] * P.t[c], P.n[a] + P.n[c] + P.eps);
      return val;
    }
    case ParamKind::TypeII_Cn: {
      const int d = P.rank;
      cplx val{1.0, 0.0};
      const cplx g1 = G(P.t_cross, P.n_cross);
      for (int j = 1; j <= d; ++j) {
        val *= G(ipow(P.t_cross, j), P.n_cross * j) / g1;
        const cplx tj = ipow(P.t_cross, j - 1);
        for (std::size_t a = 0; a < P.t.size(); ++a)
          for (std::size_t c = a + 1; c < P.t.size(); ++c)
            val *= G(tj * P.t[a] * P.t[c], P.n_cross * (j - 1) + P.n[a] + P.n[c] + P.eps);
      }
      return val;
    }
    default:
      throw domain_error("no closed-form product side for this parameter kind");
  }
}

cplx eval_rhs(const SumIntegralSpec& spec) { return eval_rhs(spec.params, spec.bases); }

std::vector<cplx> m_term_values(const SumIntegralSpec& spec) {
  spec.params.validate(spec.bases);
  if (kernel_rank(spec.params) != 1)
    throw domain_error("m_term_values expects a rank-1 kernel");
  const cplx norm = assembly_norm(spec.params, spec.bases, 1);
  std::vector<cplx> out;
  for (long m = 0; m < spec.bases.r; ++m) {
    const BalancedParams& P = spec.params;
    const Bases& b = spec.bases;
    const long ms[1] = {m};
    BatchFn1 batch = [&](std::span<const cplx> nodes, std::span<cplx> o) {
      GammaGridCache cache(b);
      prefill_pointwise(cache, nodes, ms, P);
      parallel_for(nodes.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
          o[i] = kernel_value({{nodes[i]}, {m}}, P, b, &cache);
      });
    };
    out.push_back(torus_integral(batch, spec.grid).value * norm);
  }
  return out;
}

cplx fold_m_terms(std::span<const cplx> c, long eps, int r) {
  if (static_cast<int>(c.size()) != r) throw domain_error("fold expects r terms");
  if (eps != 0 && eps != 1) throw domain_error("fold expects eps in {0,1}");
  cplx acc{};
  if (eps == 0) {
    acc = c[0];
    if (r % 2 == 0) {
      acc += c[r / 2];
      for (int m = 1; m < r / 2; ++m) acc += 2.0 * c[m];
    } else {
      for (int m = 1; m <= (r - 1) / 2; ++m) acc += 2.0 * c[m];
    }
  } else {
    if (r % 2 == 0) {
      for (int m = 0; m < r / 2; ++m) acc += 2.0 * c[m];
    } else {
      acc = c[(r - 1) / 2];
      for (int m = 0; m <= (r - 3) / 2; ++m) acc += 2.0 * c[m];
    }
  }
  return acc;
}

SumIntegralResult eval_V(const BalancedParams& P, const Bases& b, const GridSpec& grid) {
  if (P.kind != ParamKind::V8 && P.kind != ParamKind::TypeII_Cd_V)
    throw domain_error("eval_V expects V8 or TypeII_Cd_V parameters");
  SumIntegralSpec spec{P, b, grid, {}};
  return eval_lhs(spec);
}

cplx apply_vandiejen(const LatticeFn& f, const LatticePoint& pt, const BalancedParams& P,
                     const Bases& b) {
  const std::size_t d = pt.z.size();
  if (d == 0 || pt.m.size() != d)
    throw domain_error("apply_vandiejen: malformed lattice point");
  std::vector<cplx> w(d);
  for (std::size_t l = 0; l < d; ++l) w[l] = pt.z[l] * ipow(b.q, -pt.m[l]);
  const cplx f0 = f(pt);
  cplx acc{};
  for (std::size_t j = 0; j < d; ++j) {
    LatticePoint up = pt;
    up.z[j] *= b.p;
    up.m[j] -= 1;
    LatticePoint dn = pt;
    dn.z[j] /= b.p;
    dn.m[j] += 1;
    acc += vandiejen_A(j, w, false, P, b) * (f(up) - f0);
    acc += vandiejen_A(j, w, true, P, b) * (f(dn) - f0);
  }
  return acc;
}

SumIntegralResult inner_product(const LatticeFn& f, const LatticeFn& g,
                                const BalancedParams& P, const Bases& b,
                                const GridSpec& grid) {
  if (P.kind != ParamKind::TypeII_Cd_V)
    throw domain_error("inner_product expects TypeII_Cd_V parameters");
  if (P.eps != 0) throw domain_error("inner_product is defined at eps = 0");
  LatticeFn fg = [&](const LatticePoint& pt) { return f(pt) * g(pt); };
  SumIntegralSpec spec{P, b, grid, {}};
  return assemble(spec, &fg);
}

}  // namespace rehf
