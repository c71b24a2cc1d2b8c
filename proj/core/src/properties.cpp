#include <algorithm>
#include <chrono>
#include <cmath>

#include "rehf/verify.hpp"

namespace rehf {

namespace {

using clock_type = std::chrono::steady_clock;

double ratio_dev(cplx lhs, cplx rhs) {
  double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  return std::abs(lhs - rhs) / scale;
}

// shared worst-sample bookkeeping for the property loops
struct PropertyRun {
  IdentityReport rep;
  clock_type::time_point t0 = clock_type::now();
  int samples = 0;

  PropertyRun(std::string id, double tol) {
    rep.identity_id = std::move(id);
    rep.tolerance = tol;
  }
  void observe(double dev, cplx lhs, cplx rhs, const Bases& b) {
    ++samples;
    if (dev >= rep.rel_dev) {
      rep.rel_dev = dev;
      rep.lhs = lhs;
      rep.rhs = rhs;
      rep.p = b.p;
      rep.q = b.q;
      rep.r = b.r;
    }
  }
  IdentityReport done() {
    rep.pass = rep.rel_dev <= rep.tolerance;
    rep.wall_ms =
        std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
    rep.note = std::to_string(samples) + " samples";
    return rep;
  }
};

}  // namespace

IdentityReport property_theta_addition(ParamSampler& s, int samples) {
  PropertyRun run("prop-theta-addition", 1e-12);
  for (int i = 0; i < samples; ++i) {
    Bases b = s.bases(1);
    cplx x = s.annulus(0.5, 1.3), y = s.annulus(0.5, 1.3);
    cplx w = s.annulus(0.5, 1.3), z = s.annulus(0.5, 1.3);
    cplx t1 = theta_pm(x, w, b.p) * theta_pm(y, z, b.p);
    cplx t2 = theta_pm(x, z, b.p) * theta_pm(y, w, b.p);
    cplx t3 = (y / w) * theta_pm(x, y, b.p) * theta_pm(w, z, b.p);
    double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
    run.observe(std::abs(t1 - t2 - t3) / scale, t1 - t2 - t3, 0.0, b);
  }
  return run.done();
}

IdentityReport property_gamma_quasiperiod(ParamSampler& s, int samples) {
  PropertyRun run("prop-gamma-quasiperiod", 1e-11);
  for (int i = 0; i < samples; ++i) {
    Bases b = s.bases(1 + i % 3);
    cplx z = s.annulus(0.4, 0.9);
    long m = s.uniform_int(-b.r, b.r);
    long k = (i % 2 ? 1 : -1) * s.uniform_int(1, 2);
    cplx lhs = gamma_rarefied(z, m + k * b.r, b);
    cplx rhs = quasiperiod_factor(z, m, k, b) * gamma_rarefied(z, m, b);
    run.observe(ratio_dev(lhs, rhs), lhs, rhs, b);
  }
  return run.done();
}

IdentityReport property_gamma_inversion(ParamSampler& s, int samples) {
  PropertyRun run("prop-gamma-inversion", 1e-12);
  for (int i = 0; i < samples; ++i) {
    Bases b = s.bases(1 + i % 3);
    cplx z = s.annulus(0.4, 0.9);
    long m = s.uniform_int(-2L * b.r, 2L * b.r);
    cplx v1 = gamma_rarefied(z, m, b) * gamma_rarefied(b.pq / z, -m, b);
    cplx v2 = gamma_rarefied(b.sqrt_pq, m, b) * gamma_rarefied(b.sqrt_pq, -m, b);
    double dev = std::max(std::abs(v1 - 1.0), std::abs(v2 - 1.0));
    run.observe(dev, std::abs(v1 - 1.0) >= std::abs(v2 - 1.0) ? v1 : v2, 1.0, b);
  }
  return run.done();
}

IdentityReport property_gamma_pq_symmetry(ParamSampler& s, int samples) {
  PropertyRun run("prop-gamma-pq-symmetry", 1e-12);
  for (int i = 0; i < samples; ++i) {
    Bases b = s.bases(1 + i % 3);
    Bases bs = b.swapped();
    cplx z = s.annulus(0.4, 0.9);
    long m = s.uniform_int(-2L * b.r, 2L * b.r);
    cplx lhs = gamma_rarefied(z, m, b);
    cplx rhs = gamma_rarefied(z, -m, bs);
    run.observe(ratio_dev(lhs, rhs), lhs, rhs, b);
  }
  return run.done();
}

IdentityReport property_h_ellipticity(ParamSampler& s, int samples) {
  PropertyRun run("prop-h-ellipticity", 1e-11);
  for (int i = 0; i < samples; ++i) {
    Bases b = s.bases(1 + i % 3);
    BalancedParams P = s.draw(ParamKind::Beta6, 1, b, i % 2);
    cplx z = s.annulus(0.85, 1.15);
    long m = s.uniform_int(-b.r, b.r);
    auto [h1_at_z, h2_at_z] = h_coefficients(z, m, P, b);
    auto [h1_shift, h2_unused] = h_coefficients(z * b.q_r, m, P, b);
    auto [h1_unused, h2_shift] = h_coefficients(z * b.p_r, m, P, b);
    (void)h2_unused;
    (void)h1_unused;
    double dev = std::max(ratio_dev(h1_at_z, h1_shift), ratio_dev(h2_at_z, h2_shift));
    run.observe(dev, h1_at_z, h1_shift, b);
  }
  return run.done();
}

IdentityReport property_delta_difference(ParamSampler& s, int samples) {
  PropertyRun run("prop-delta-difference", 1e-9);
  for (int i = 0; i < samples; ++i) {
    Bases b = s.bases(1 + i % 3);
    BalancedParams P = s.draw(ParamKind::Beta6, 1, b, i % 2);
    cplx z = s.annulus(0.85, 1.15);
    long m = s.uniform_int(-(b.r - 1), b.r - 1);
    cplx k0 = kernel_beta({{z}, {m}}, P, b);
    cplx kp = kernel_beta({{b.p * z}, {m - 1}}, P, b);
    cplx kq = kernel_beta({{b.q * z}, {m + 1}}, P, b);
    auto [h1, h2] = h_coefficients(z, m, P, b);
    double dev = std::max(ratio_dev(kp, h1 * k0), ratio_dev(kq, h2 * k0));
    run.observe(dev, kp, h1 * k0, b);
  }
  return run.done();
}

IdentityReport property_ggrel(ParamSampler& s, int samples) {
  PropertyRun run("prop-ggrel", 1e-11);
  for (int i = 0; i < samples; ++i) {
    Bases b = s.bases(1 + i % 3);
    cplx z = s.annulus(0.4, 0.9);
    long m = s.uniform_int(0, b.r);
    cplx lhs = gamma_rarefied(z, m, b);
    cplx rhs = gamma_rarefied_factored(z, m, b);
    run.observe(ratio_dev(lhs, rhs), lhs, rhs, b);
  }
  return run.done();
}

}  // namespace rehf
