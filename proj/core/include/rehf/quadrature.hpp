#pragma once

#include <functional>
#include <vector>

#include "rehf/common.hpp"
#include "rehf/errors.hpp"

namespace rehf {

struct GridSpec {
  int points_per_dim = 64;  // power of two, >= 8
  int rank = 1;             // 1 or 2
  int refine_limit = 14;    // maximum number of grid doublings
  double target_rel = 1e-10;
};

struct RefineStep {
  int grid = 0;           // points per dimension at this level
  cplx value{};
  double rel_change = 0;  // change from the previous level, 0 at the first
};

struct SumIntegralResult {
  cplx value{};
  double est_rel_error = 0.0;  // relative change between the last two levels
  int grid_used = 0;
  long m_terms = 0;  // filled by sum-integral assembly, 0 for bare quadrature
  double wall_ms = 0.0;
  std::vector<RefineStep> history;
};

// Batch evaluation contract: the integrator hands the caller the whole node
// set and a matching output span, so implementations can amortize shared
// subexpressions (gamma grids in particular) across a level.
using BatchFn1 = std::function<void(std::span<const cplx>, std::span<cplx>)>;

// Rank-2 contract: nodes has N entries, out has N*N entries in row-major
// order, out[i*N + j] = f(nodes[i], nodes[j]).
using BatchFn2 = std::function<void(std::span<const cplx>, std::span<cplx>)>;

// Nodes of the N-point rule: z_k = exp(i pi (2k+1)/N). The half-step offset
// keeps the rule inversion-closed (the set is stable under z -> 1/z) while
// avoiding the points +-1, where several kernel coefficient functions have
// removable 0/0 structure.
std::vector<cplx> torus_nodes(int n);

// Equal-weight average of f over torus_nodes(N), N doubled until two levels
// agree within spec.target_rel or spec.refine_limit is reached. Convergence
// is judged against max(|value|, 1e-3 * mean |f|) so that integrals that are
// exactly zero by symmetry settle instead of chasing relative noise.
SumIntegralResult torus_integral(const BatchFn1& f, const GridSpec& spec);
SumIntegralResult torus_integral(const std::function<cplx(cplx)>& f, const GridSpec& spec);

SumIntegralResult torus_integral_2d(const BatchFn2& f, const GridSpec& spec);
SumIntegralResult torus_integral_2d(const std::function<cplx(cplx, cplx)>& f,
                                    const GridSpec& spec);

// Trapezoid rule for (1/2pi) * integral of f(iy) dy over |y| <= height_cut,
// i.e. the contour integral of f along the imaginary axis against dx/(2pi i).
// The integrand must decay below 1e-14 of its on-axis peak at the cut.
SumIntegralResult vertical_line_integral(const std::function<cplx(cplx)>& f,
                                         double height_cut = 40.0,
                                         int step_count = 512,
                                         int refine_limit = 10,
                                         double target_rel = 1e-10);

}  // namespace rehf
