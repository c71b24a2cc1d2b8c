#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rehf/evaluator.hpp"

namespace rehf {

struct SamplerConfig {
  std::uint64_t seed = 0x5245484653414d50ull;
  double p_mag_lo = 0.05;
  double p_mag_hi = 0.25;
  double q_mag_lo = 0.05;
  double q_mag_hi = 0.25;
  double phase_cap = 0.6;  // |arg p|, |arg q| bound, keeps pq away from the negative axis
  double t_mag_lo = 0.35;
  double t_mag_cap = 0.85;
  long n_abs_cap = -1;  // negative: use r-1
  int resample_limit = 1000;
};

// Deterministic balanced-parameter sampler: free magnitudes drawn in annuli,
// the dependent parameter set from the product constraint and accepted only
// inside the window, discrete data drawn in [-cap, cap] with the last entry
// fixed by the sum constraint.
class ParamSampler {
 public:
  explicit ParamSampler(const SamplerConfig& cfg);
  const SamplerConfig& config() const { return cfg_; }

  Bases bases(int r);
  BalancedParams draw(ParamKind kind, int rank, const Bases& b, long eps);
  // annulus override applied to the free and the dependent continuous parameters
  BalancedParams draw_window(ParamKind kind, int rank, const Bases& b, long eps,
                             double t_lo, double t_hi);
  // all magnitudes within [spread_lo, spread_hi] times the balanced magnitude
  // |product|^{1/count}; keeps reflected parameter sets inside the unit disc
  // and the difference-operator pole ladders away from the contour
  BalancedParams draw_balanced(ParamKind kind, int rank, const Bases& b, long eps,
                               double spread_lo = 0.85, double spread_hi = 1.15);
  // general type I C_d with product power m_power+1, and A_n with families of
  // rank + m_power + 2 parameters
  BalancedParams draw_general_I(int rank, int m_power, const Bases& b, long eps,
                                double t_lo, double t_hi);
  BalancedParams draw_An(int rank, int m_power, const Bases& b, long eps);
  BalancedParams draw_An(int rank, int m_power, const Bases& b, long eps, double t_lo,
                         double t_hi);

  double uniform(double lo, double hi);
  long uniform_int(long lo, long hi);
  cplx annulus(double lo, double hi);

 private:
  BalancedParams draw_impl(ParamKind kind, int rank, const Bases& b, long eps, double t_lo,
                           double t_hi, double last_lo, double last_hi, bool relative);
  BalancedParams an_impl(int rank, int m_power, const Bases& b, long eps, double t_lo,
                         double t_hi, double last_lo, double last_hi);

  SamplerConfig cfg_;
  std::mt19937_64 rng_;
};

struct IdentityReport {
  std::string identity_id;
  cplx lhs{};
  cplx rhs{};
  double rel_dev = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool conjecture = false;  // labeled conjecture-consistent, never proven
  std::string note;
  BalancedParams params;
  cplx p{};
  cplx q{};
  int r = 1;
  int grid_used = 0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
};

std::string to_json_line(const IdentityReport& rep);

// ---- proven identities ----

IdentityReport check_rfint(const BalancedParams& P, const Bases& b, const GridSpec& g,
                           double tol = 1e-8);
IdentityReport check_typeI_Cn(const BalancedParams& P, const Bases& b, const GridSpec& g,
                              double tol = 0.0);  // 0: rank default
IdentityReport check_typeII_Cn(const BalancedParams& P, const Bases& b, const GridSpec& g,
                               double tol = 0.0);

// W(E7) transformation images: V(P) = prefactor * V(image).
struct E7Image {
  BalancedParams params;
  cplx prefactor{};
};
E7Image e7_image(const BalancedParams& P, const Bases& b, int which);

IdentityReport check_E7(const BalancedParams& P, const Bases& b, const GridSpec& g,
                        int which, double tol = 1e-8);
IdentityReport check_E7_roundtrip(const BalancedParams& P, const Bases& b,
                                  double tol = 1e-10);

// three-term contiguous relation; t/n carry the shifted balancing
// prod t = p q^2, sum n + 4 eps = 1
IdentityReport check_contiguous(std::span<const cplx> t, std::span<const long> n, long eps,
                                const Bases& b, const GridSpec& g, double tol = 1e-8);

// hypergeometric equation on V8-balanced data; base_swapped runs the partner
// with p and q exchanged
IdentityReport check_reheq(std::span<const cplx> t, std::span<const long> n, long eps,
                           const Bases& b, const GridSpec& g, bool base_swapped = false,
                           double tol = 1e-7);
IdentityReport check_reheq_sym(std::span<const cplx> t, std::span<const long> n,
                               const Bases& b, const GridSpec& g, double tol = 1e-7);

IdentityReport check_vandiejen_null(const BalancedParams& P, const Bases& b,
                                    std::span<const LatticePoint> pts, double tol = 1e-13);
IdentityReport check_vandiejen_symmetry(const BalancedParams& P, const Bases& b,
                                        const GridSpec& g, double tol = 1e-8);

// ---- degeneration limits ----

IdentityReport check_rahman(std::span<const cplx> t, cplx q, int r, double tol = 1e-10);
IdentityReport check_new_qbeta(std::span<const cplx> t, cplx q, int r, bool flipped,
                               double tol = 1e-10);
IdentityReport check_mellin_barnes(std::span<const double> u, int r, bool flipped,
                                   double tol = 1e-8);
IdentityReport check_smallp_gamma_rate(cplx z, cplx q, int r, double slope_tol = 0.1);
IdentityReport check_cm_scaling(long eps, int r, double slope_tol = 0.1);

// ---- conjectured transformations (reported, never marked proven) ----

IdentityReport check_conj_CdCm(const BalancedParams& P, const Bases& b, const GridSpec& g,
                               double tol);
IdentityReport check_conj_typeII_Cd(const BalancedParams& P, const Bases& b,
                                    const GridSpec& g, double tol);
IdentityReport check_conj_AnAm(const BalancedParams& P, const Bases& b, const GridSpec& g,
                               double tol);

// ---- property suites (>= `samples` random draws each) ----

IdentityReport property_theta_addition(ParamSampler& s, int samples = 50);
IdentityReport property_gamma_quasiperiod(ParamSampler& s, int samples = 50);
IdentityReport property_gamma_inversion(ParamSampler& s, int samples = 50);
IdentityReport property_gamma_pq_symmetry(ParamSampler& s, int samples = 50);
IdentityReport property_h_ellipticity(ParamSampler& s, int samples = 50);
IdentityReport property_delta_difference(ParamSampler& s, int samples = 50);
IdentityReport property_ggrel(ParamSampler& s, int samples = 50);

// ---- campaign driver ----

struct CampaignOptions {
  std::string suite = "all";  // proven | conjectures | limits | properties | all
  std::vector<std::string> only;  // empty: every suite entry; else ids or dash prefixes
  SamplerConfig sampler;
  int draws = 1;
  double tolerance_scale = 1.0;
  int grid_points = 0;  // 0: per-check default
  int jobs = 0;
};

using ReportSink = std::function<void(const IdentityReport&)>;

// true when filter equals id or is a dash-delimited prefix of it
bool id_matches(std::string_view filter, std::string_view id);

std::vector<std::string> campaign_ids(const std::string& suite);
std::vector<IdentityReport> run_campaign(const CampaignOptions& opt,
                                         const ReportSink& sink = {});

}  // namespace rehf
