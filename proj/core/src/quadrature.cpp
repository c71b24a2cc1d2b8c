#include "rehf/quadrature.hpp"

#include <chrono>
#include <cmath>

namespace rehf {

namespace {

constexpr double kPi = 3.14159265358979323846;

double mean_abs(std::span<const cplx> vals) {
  std::vector<double> mags(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) mags[i] = std::abs(vals[i]);
  return pairwise_sum(std::span<const double>(mags)) / static_cast<double>(vals.size());
}

// Shared doubling driver: `level_value` evaluates one grid level and reports
// (value, mean |f|) for the convergence scale.
template <typename LevelFn>
SumIntegralResult refine_loop(int n0, int refine_limit, double target_rel,
                              const char* who, LevelFn&& level_value) {
  auto t0 = std::chrono::steady_clock::now();
  SumIntegralResult res;
  cplx prev{};
  bool have_prev = false;
  int n = n0;
  for (int level = 0; level <= refine_limit; ++level, n *= 2) {
    auto [val, fscale] = level_value(n);
    double change = 0.0;
    if (have_prev) {
      double scale = std::max(std::abs(val), 1e-3 * fscale);
      change = scale > 0.0 ? std::abs(val - prev) / scale : 0.0;
      res.est_rel_error = change;
    }
    res.history.push_back({n, val, change});
    res.value = val;
    res.grid_used = n;
    if (have_prev && change <= target_rel) break;
    prev = val;
    have_prev = true;
  }
  auto t1 = std::chrono::steady_clock::now();
  res.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (res.est_rel_error > 10.0 * target_rel)
    throw convergence_error(std::string(who) + ": refinement limit reached at estimated error " +
                            std::to_string(res.est_rel_error));
  return res;
}

void validate(const GridSpec& spec, int rank, const char* who) {
  if (spec.points_per_dim < 8 || (spec.points_per_dim & (spec.points_per_dim - 1)) != 0)
    throw domain_error(std::string(who) + ": points_per_dim must be a power of two >= 8");
  if (spec.refine_limit < 0 || spec.target_rel <= 0.0)
    throw domain_error(std::string(who) + ": bad refinement parameters");
  if (spec.rank != rank)
    throw domain_error(std::string(who) + ": GridSpec rank does not match the integrator");
}

}  // namespace

std::vector<cplx> torus_nodes(int n) {
  std::vector<cplx> nodes(n);
  for (int k = 0; k < n; ++k) {
    double arg = kPi * (2.0 * k + 1.0) / n;
    nodes[k] = {std::cos(arg), std::sin(arg)};
  }
  return nodes;
}

SumIntegralResult torus_integral(const BatchFn1& f, const GridSpec& spec) {
  validate(spec, 1, "torus_integral");
  return refine_loop(spec.points_per_dim, spec.refine_limit, spec.target_rel, "torus_integral",
                     [&](int n) {
                       std::vector<cplx> nodes = torus_nodes(n);
                       std::vector<cplx> vals(n);
                       f(nodes, vals);
                       for (const cplx& v : vals) ensure_finite(v, "torus_integral");
                       cplx avg = pairwise_sum(std::span<const cplx>(vals)) / static_cast<double>(n);
                       return std::pair<cplx, double>(avg, mean_abs(vals));
                     });
}

SumIntegralResult torus_integral(const std::function<cplx(cplx)>& f, const GridSpec& spec) {
  return torus_integral(
      [&](std::span<const cplx> nodes, std::span<cplx> out) {
        parallel_for(nodes.size(), [&](std::size_t lo, std::size_t hi) {
          for (std::size_t i = lo; i < hi; ++i) out[i] = f(nodes[i]);
        });
      },
      spec);
}

SumIntegralResult torus_integral_2d(const BatchFn2& f, const GridSpec& spec) {
  validate(spec, 2, "torus_integral_2d");
  return refine_loop(
      spec.points_per_dim, spec.refine_limit, spec.target_rel, "torus_integral_2d", [&](int n) {
        std::vector<cplx> nodes = torus_nodes(n);
        std::vector<cplx> vals(static_cast<std::size_t>(n) * n);
        f(nodes, vals);
        for (const cplx& v : vals) ensure_finite(v, "torus_integral_2d");
        cplx avg = pairwise_sum(std::span<const cplx>(vals)) / static_cast<double>(vals.size());
        return std::pair<cplx, double>(avg, mean_abs(vals));
      });
}

SumIntegralResult torus_integral_2d(const std::function<cplx(cplx, cplx)>& f,
                                    const GridSpec& spec) {
  return torus_integral_2d(
      [&](std::span<const cplx> nodes, std::span<cplx> out) {
        std::size_t n = nodes.size();
        parallel_for(n * n, [&](std::size_t lo, std::size_t hi) {
          for (std::size_t i = lo; i < hi; ++i) out[i] = f(nodes[i / n], nodes[i % n]);
        });
      },
      spec);
}

SumIntegralResult vertical_line_integral(const std::function<cplx(cplx)>& f, double height_cut,
                                         int step_count, int refine_limit, double target_rel) {
  if (height_cut <= 0.0 || step_count < 8)
    throw domain_error("vertical_line_integral: bad height_cut or step_count");
  return refine_loop(
      step_count, refine_limit, target_rel, "vertical_line_integral", [&](int m) {
        double h = 2.0 * height_cut / m;
        std::vector<cplx> vals(m + 1);
        parallel_for(vals.size(), [&](std::size_t lo, std::size_t hi) {
          for (std::size_t k = lo; k < hi; ++k)
            vals[k] = f(cplx{0.0, -height_cut + h * static_cast<double>(k)});
        });
        for (const cplx& v : vals) ensure_finite(v, "vertical_line_integral");
        double peak = 0.0;
        for (const cplx& v : vals) peak = std::max(peak, std::abs(v));
        double edge = std::max(std::abs(vals.front()), std::abs(vals.back()));
        if (edge > 1e-14 * peak)
          throw convergence_error(
              "vertical_line_integral: integrand has not decayed to 1e-14 of its peak at the "
              "height cut");
        vals.front() *= 0.5;
        vals.back() *= 0.5;
        cplx sum = pairwise_sum(std::span<const cplx>(vals));
        return std::pair<cplx, double>(sum * h / (2.0 * kPi), mean_abs(vals));
      });
}

}  // namespace rehf
