#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string_view>

#include "json.hpp"
#include "rehf/verify.hpp"

namespace rehf {

namespace {

nlohmann::ordered_json cplx_pair(cplx z) {
  return nlohmann::ordered_json::array({z.real(), z.imag()});
}

}  // namespace

std::string to_json_line(const IdentityReport& rep) {
  nlohmann::ordered_json j;
  j["identity_id"] = rep.identity_id;
  j["pass"] = rep.pass;
  j["conjecture"] = rep.conjecture;
  j["rel_dev"] = rep.rel_dev;
  j["tolerance"] = rep.tolerance;
  j["lhs"] = cplx_pair(rep.lhs);
  j["rhs"] = cplx_pair(rep.rhs);
  nlohmann::ordered_json params;
  params["kind"] = to_string(rep.params.kind);
  auto tarr = nlohmann::ordered_json::array();
  for (cplx tv : rep.params.t) tarr.push_back(cplx_pair(tv));
  params["t"] = tarr;
  params["n"] = rep.params.n;
  params["eps"] = rep.params.eps;
  params["rank"] = rep.params.rank;
  if (rep.params.kind == ParamKind::TypeII_Cn ||
      rep.params.kind == ParamKind::TypeII_Cd_V) {
    params["t_cross"] = cplx_pair(rep.params.t_cross);
    params["n_cross"] = rep.params.n_cross;
  }
  if (!rep.params.s.empty()) {
    auto sarr = nlohmann::ordered_json::array();
    for (cplx sv : rep.params.s) sarr.push_back(cplx_pair(sv));
    params["s"] = sarr;
    params["k"] = rep.params.k;
  }
  j["params"] = params;
  j["bases"] = {{"p", cplx_pair(rep.p)}, {"q", cplx_pair(rep.q)}, {"r", rep.r}};
  j["grid_used"] = rep.grid_used;
  j["wall_time_ms"] = rep.wall_ms;
  j["seed"] = rep.seed;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j.dump();
}

namespace {

std::uint64_t fnv1a(std::string_view sv) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : sv) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view id, int draw) {
  std::uint64_t h = seed ^ fnv1a(id) ^ (0x9e3779b97f4a7c15ull * (draw + 1));
  h += 0x9e3779b97f4a7c15ull;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4568bull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  return h ^ (h >> 31);
}

GridSpec make_grid(const CampaignOptions& opt, int pts, double target) {
  GridSpec g;
  g.points_per_dim = opt.grid_points > 0 ? opt.grid_points : pts;
  g.target_rel = target;
  return g;
}

struct Entry {
  std::string id;
  std::string suite;
  std::function<IdentityReport(ParamSampler&, const CampaignOptions&)> run;
};

double ratio_dev(cplx lhs, cplx rhs) {
  double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  return std::abs(lhs - rhs) / scale;
}

// retries image-domain rejections from the balanced-window validations
template <typename Fn>
IdentityReport with_resample(Fn&& fn, int attempts = 60) {
  for (int i = 0; i + 1 < attempts; ++i) {
    try {
      return fn();
    } catch (const domain_error&) {
      continue;
    }
  }
  return fn();
}

// draw with prod t = p q^2 and sum n + 4 eps = 1 for the contiguous relation
void draw_shifted_v8(ParamSampler& s, const Bases& b, long eps, std::vector<cplx>& t,
                     std::vector<long>& n) {
  const long cap = std::max(0L, static_cast<long>(b.r) - 1);
  for (int attempt = 0; attempt < s.config().resample_limit; ++attempt) {
    t.assign(8, cplx{});
    n.assign(8, 0);
    cplx prod = 1.0;
    for (int a = 0; a < 7; ++a) {
      t[a] = s.annulus(0.35, 0.8);
      prod *= t[a];
    }
    t[7] = b.p * b.q * b.q / prod;
    double mag = std::abs(t[7]);
    if (mag < 0.01 || mag > 0.85) continue;
    long acc = 0;
    for (int a = 0; a < 7; ++a) {
      n[a] = s.uniform_int(-cap, cap);
      acc += n[a];
    }
    n[7] = 1 - 4 * eps - acc;
    if (std::labs(n[7]) > 3 * cap + 4) continue;
    return;
  }
  throw convergence_error("contiguous draw: resample limit exhausted");
}

// V8-balanced draw with |t_1|, |t_2| small enough that both p and q shifts
// keep every argument inside the unit window; the middle magnitudes are sized
// so the dependent entry lands near 0.3
void draw_shiftable_v8(ParamSampler& s, const Bases& b, long eps, bool even_pair,
                       std::vector<cplx>& t, std::vector<long>& n) {
  const long cap = std::max(0L, static_cast<long>(b.r) - 1);
  const double mn = 0.8 * std::min(std::abs(b.p), std::abs(b.q));
  for (int attempt = 0; attempt < s.config().resample_limit; ++attempt) {
    t.assign(8, cplx{});
    n.assign(8, 0);
    cplx prod = 1.0;
    for (int a = 0; a < 2; ++a) {
      t[a] = s.annulus(0.5 * mn, mn);
      prod *= t[a];
    }
    double mid = std::pow(std::norm(b.pq) / (std::abs(prod) * 0.3), 0.2);
    double lo = std::clamp(0.85 * mid, 0.05, 0.72);
    double hi = std::clamp(1.15 * mid, 0.1, 0.85);
    for (int a = 2; a < 7; ++a) {
      t[a] = s.annulus(lo, hi);
      prod *= t[a];
    }
    t[7] = b.pq * b.pq / prod;
    double mag = std::abs(t[7]);
    if (mag < 0.02 || mag > 0.85) continue;
    long acc = 0;
    for (int a = 0; a < 7; ++a) {
      n[a] = s.uniform_int(-cap, cap);
      acc += n[a];
    }
    n[7] = -4 * eps - acc;
    if (std::labs(n[7]) > 3 * cap + 4) continue;
    if (even_pair && ((n[0] - n[1]) % 2 + 2) % 2 != 0) {
      if (std::labs(n[1] - 1) > cap + 1) continue;
      acc -= n[1];
      n[1] -= 1;
      acc += n[1];
      n[7] = -4 * eps - acc;
    }
    return;
  }
  throw convergence_error("shiftable draw: resample limit exhausted");
}

std::vector<Entry> build_entries() {
  std::vector<Entry> es;
  auto add = [&](std::string id, std::string suite, auto fn) {
    es.push_back(Entry{std::move(id), std::move(suite), std::move(fn)});
  };

  // ---- proven: rarefied beta evaluations ----
  for (int r : {1, 2, 3})
    for (long eps : {0L, 1L}) {
      double tol = (r == 1 && eps == 0) ? 1e-10 : 1e-8;
      add("rfint-r" + std::to_string(r) + "-e" + std::to_string(eps), "proven",
          [r, eps, tol](ParamSampler& s, const CampaignOptions& opt) {
            Bases b = s.bases(r);
            BalancedParams P = s.draw(ParamKind::Beta6, 1, b, eps);
            return check_rfint(P, b, make_grid(opt, 64, 1e-10), tol);
          });
    }
  add("rfint-window-r2", "proven", [](ParamSampler& s, const CampaignOptions& opt) {
    Bases b = s.bases(2);
    BalancedParams P = s.draw(ParamKind::Beta6, 1, b, 1);
    SumIntegralSpec spec{P, b, make_grid(opt, 64, 1e-10), {{3, 4}}};
    auto lhs = eval_lhs(spec);
    IdentityReport rep;
    rep.params = P;
    rep.p = b.p;
    rep.q = b.q;
    rep.r = b.r;
    rep.tolerance = 1e-8;
    rep.lhs = lhs.value;
    rep.rhs = eval_rhs(P, b);
    rep.grid_used = lhs.grid_used;
    rep.rel_dev = ratio_dev(rep.lhs, rep.rhs);
    rep.pass = rep.rel_dev <= rep.tolerance;
    rep.wall_ms = lhs.wall_ms;
    rep.note = "m window shifted to {3,4}";
    return rep;
  });
  for (long eps : {0L, 1L}) {
    add("typeI-c2-r2-e" + std::to_string(eps), "proven",
        [eps](ParamSampler& s, const CampaignOptions& opt) {
          Bases b = s.bases(2);
          BalancedParams P = s.draw(ParamKind::TypeI_Cn, 2, b, eps);
          return check_typeI_Cn(P, b, make_grid(opt, 32, 1e-7), 1e-6);
        });
    add("typeII-c2-r2-e" + std::to_string(eps), "proven",
        [eps](ParamSampler& s, const CampaignOptions& opt) {
          Bases b = s.bases(2);
          BalancedParams P = s.draw(ParamKind::TypeII_Cn, 2, b, eps);
          return check_typeII_Cn(P, b, make_grid(opt, 32, 1e-7), 1e-6);
        });
  }

  // ---- proven: W(E7) transformations ----
  for (int r : {1, 2})
    for (int which : {1, 2, 3})
      add("e7trafo" + std::to_string(which) + "-r" + std::to_string(r), "proven",
          [r, which](ParamSampler& s, const CampaignOptions& opt) {
            Bases b = s.bases(r);
            long eps = s.uniform_int(0, 1);
            return with_resample([&] {
              BalancedParams P = s.draw_balanced(ParamKind::V8, 1, b, eps);
              return check_E7(P, b, make_grid(opt, 64, 1e-10), which, 1e-8);
            });
          });
  add("e7trafo1-r2-mixed", "proven", [](ParamSampler& s, const CampaignOptions& opt) {
    Bases b = s.bases(2);
    return with_resample([&] {
      BalancedParams P = s.draw_balanced(ParamKind::V8, 1, b, 0);
      long s4 = P.n[0] + P.n[1] + P.n[2] + P.n[3];
      if ((s4 % 2 + 2) % 2 != 1) throw domain_error("want odd half sum");
      return check_E7(P, b, make_grid(opt, 64, 1e-10), 1, 1e-8);
    }, 400);
  });
  add("e7trafo1-roundtrip-r2", "proven", [](ParamSampler& s, const CampaignOptions&) {
    Bases b = s.bases(2);
    BalancedParams P = s.draw(ParamKind::V8, 1, b, s.uniform_int(0, 1));
    return check_E7_roundtrip(P, b);
  });

  // ---- proven: contiguous relation and difference equations ----
  for (int r : {1, 2})
    add("cont1-r" + std::to_string(r), "proven",
        [r](ParamSampler& s, const CampaignOptions& opt) {
          Bases b = s.bases(r);
          std::vector<cplx> t;
          std::vector<long> n;
          draw_shifted_v8(s, b, 0, t, n);
          return check_contiguous(t, n, 0, b, make_grid(opt, 64, 1e-10), 1e-8);
        });
  for (int r : {1, 2})
    add("reheq-r" + std::to_string(r), "proven",
        [r](ParamSampler& s, const CampaignOptions& opt) {
          Bases b = s.bases(r);
          std::vector<cplx> t;
          std::vector<long> n;
          draw_shiftable_v8(s, b, 0, false, t, n);
          return check_reheq(t, n, 0, b, make_grid(opt, 64, 1e-10), false, 1e-7);
        });
  add("reheq-par-r2", "proven", [](ParamSampler& s, const CampaignOptions& opt) {
    Bases b = s.bases(2);
    std::vector<cplx> t;
    std::vector<long> n;
    draw_shiftable_v8(s, b, 0, false, t, n);
    return check_reheq(t, n, 0, b, make_grid(opt, 64, 1e-10), true, 1e-7);
  });
  for (int r : {1, 2})
    add("reheq-sym-r" + std::to_string(r), "proven",
        [r](ParamSampler& s, const CampaignOptions& opt) {
          Bases b = s.bases(r);
          std::vector<cplx> t;
          std::vector<long> n;
          draw_shiftable_v8(s, b, 0, true, t, n);
          GridSpec g = make_grid(opt, 64, 1e-10);
          IdentityReport plain = check_reheq(t, n, 0, b, g, false, 1e-7);
          IdentityReport rep = check_reheq_sym(t, n, b, g, 1e-7);
          rep.pass = rep.pass && plain.pass;
          rep.note = "plain-form residual " + std::to_string(plain.rel_dev);
          return rep;
        });

  // ---- proven: difference operator ----
  add("vandiejen-null-r2", "proven", [](ParamSampler& s, const CampaignOptions&) {
    Bases b = s.bases(2);
    BalancedParams P = s.draw(ParamKind::TypeII_Cd_V, 1, b, 0);
    std::vector<LatticePoint> pts;
    for (int i = 0; i < 3; ++i)
      pts.push_back({{s.annulus(0.9, 1.1)}, {s.uniform_int(0, b.r - 1)}});
    return check_vandiejen_null(P, b, pts, 1e-13);
  });
  for (int r : {1, 2})
    add("vandiejen-sym-r" + std::to_string(r), "proven",
        [r](ParamSampler& s, const CampaignOptions& opt) {
          // symmetry needs the contour to separate the coefficient pole
          // ladders, which holds for balanced magnitudes with |p| > |q|; the
          // operator shifts by p while the coefficients live on base q^r
          double cap = s.config().phase_cap;
          cplx q = std::polar(s.uniform(0.06, 0.15), s.uniform(-cap, cap));
          cplx p = std::polar(std::abs(q) * s.uniform(1.2, 1.6), s.uniform(-cap, cap));
          Bases b(p, q, r);
          BalancedParams P = s.draw_balanced(ParamKind::TypeII_Cd_V, 1, b, 0);
          IdentityReport rep =
              check_vandiejen_symmetry(P, b, make_grid(opt, 32, 1e-11), 1e-8);
          rep.note = "sampled with |p| > |q|";
          return rep;
        });

  // ---- conjectures ----
  auto cdcm_window = [](const Bases& b) {
    return std::pair<double, double>{1.03 * std::sqrt(std::abs(b.pq)), 0.95};
  };
  struct CdCmCase {
    int d, m;
    double tol;
  };
  for (CdCmCase c : {CdCmCase{1, 1, 1e-8}, CdCmCase{2, 1, 1e-6}, CdCmCase{1, 2, 1e-6}})
    add("cdcm-" + std::to_string(c.d) + std::to_string(c.m) + "-r2", "conjectures",
        [c, cdcm_window](ParamSampler& s, const CampaignOptions& opt) {
          Bases b = s.bases(2);
          auto [lo, hi] = cdcm_window(b);
          int pts = (c.d > 1 || c.m > 1) ? 32 : 64;
          double target = (c.d > 1 || c.m > 1) ? 1e-7 : 1e-10;
          return with_resample([&] {
            BalancedParams P = s.draw_general_I(c.d, c.m, b, s.uniform_int(0, 1), lo, hi);
            return check_conj_CdCm(P, b, make_grid(opt, pts, target), c.tol);
          });
        });
  add("cdcm-11-vs-e7trafo3", "conjectures", [cdcm_window](ParamSampler& s,
                                                          const CampaignOptions& opt) {
    Bases b = s.bases(2);
    auto [lo, hi] = cdcm_window(b);
    GridSpec g = make_grid(opt, 64, 1e-10);
    return with_resample([&] {
      BalancedParams P = s.draw_general_I(1, 1, b, s.uniform_int(0, 1), lo, hi);
      IdentityReport conj = check_conj_CdCm(P, b, g, 1e-8);
      BalancedParams Pv = P;
      Pv.kind = ParamKind::V8;
      IdentityReport e7 = check_E7(Pv, b, g, 3, 1e-8);
      IdentityReport rep = conj;
      rep.lhs = conj.lhs / e7.lhs;
      rep.rhs = conj.rhs / e7.rhs;
      rep.tolerance = 1e-10;
      rep.rel_dev = std::max(std::abs(rep.lhs - 1.0), std::abs(rep.rhs - 1.0));
      rep.pass = rep.rel_dev <= rep.tolerance;
      rep.note = "both sides agree with the 8-parameter reflection";
      return rep;
    });
  });
  for (int d : {1, 2})
    add("typeii-cd" + std::to_string(d) + "-r2", "conjectures",
        [d](ParamSampler& s, const CampaignOptions& opt) {
          Bases b = s.bases(2);
          int pts = d > 1 ? 32 : 64;
          double target = d > 1 ? 1e-7 : 1e-10;
          double tol = d > 1 ? 1e-6 : 1e-8;
          return with_resample([&] {
            BalancedParams P =
                s.draw_balanced(ParamKind::TypeII_Cd_V, d, b, s.uniform_int(0, 1));
            return check_conj_typeII_Cd(P, b, make_grid(opt, pts, target), tol);
          });
        });
  add("typeii-cd1-vs-e7trafo1", "conjectures",
      [](ParamSampler& s, const CampaignOptions& opt) {
        Bases b = s.bases(2);
        GridSpec g = make_grid(opt, 64, 1e-10);
        return with_resample([&] {
          BalancedParams P =
              s.draw_balanced(ParamKind::TypeII_Cd_V, 1, b, s.uniform_int(0, 1));
          IdentityReport conj = check_conj_typeII_Cd(P, b, g, 1e-8);
          BalancedParams Pv;
          Pv.kind = ParamKind::V8;
          Pv.t = P.t;
          Pv.n = P.n;
          Pv.eps = P.eps;
          Pv.rank = 1;
          IdentityReport e7 = check_E7(Pv, b, g, 1, 1e-8);
          IdentityReport rep = conj;
          rep.lhs = conj.lhs / e7.lhs;
          rep.rhs = conj.rhs / e7.rhs;
          rep.tolerance = 1e-10;
          rep.rel_dev = std::max(std::abs(rep.lhs - 1.0), std::abs(rep.rhs - 1.0));
          rep.pass = rep.rel_dev <= rep.tolerance;
          rep.note = "d = 1 case reduces to the first transformation";
          return rep;
        });
      });
  struct AnAmCase {
    int n, m;
    double tol;
  };
  for (AnAmCase c : {AnAmCase{1, 1, 1e-8}, AnAmCase{2, 1, 1e-6}, AnAmCase{1, 2, 1e-6}})
    add("anam-" + std::to_string(c.n) + std::to_string(c.m) + "-r2", "conjectures",
        [c](ParamSampler& s, const CampaignOptions& opt) {
          Bases b = s.bases(2);
          int pts = (c.n > 1 || c.m > 1) ? 32 : 64;
          double target = (c.n > 1 || c.m > 1) ? 1e-7 : 1e-10;
          double w = std::pow(std::abs(ipow(b.pq, c.m + 1)),
                              1.0 / static_cast<double>(2 * (c.n + c.m + 2)));
          return with_resample([&] {
            BalancedParams P = s.draw_An(c.n, c.m, b, s.uniform_int(0, c.n), 0.85 * w,
                                         std::min(1.15 * w, 0.9));
            return check_conj_AnAm(P, b, make_grid(opt, pts, target), c.tol);
          });
        });
  add("anam-11-vs-e7trafo2", "conjectures",
      [](ParamSampler& s, const CampaignOptions& opt) {
        Bases b = s.bases(2);
        GridSpec g = make_grid(opt, 64, 1e-10);
        return with_resample([&] {
          long eps = s.uniform_int(0, 1);
          BalancedParams Pv = s.draw_balanced(ParamKind::V8, 1, b, eps);
          BalancedParams Pa;
          Pa.kind = ParamKind::TypeI_An;
          Pa.rank = 1;
          Pa.eps = eps;
          for (int a = 0; a < 4; ++a) {
            Pa.t.push_back(Pv.t[a]);
            Pa.n.push_back(Pv.n[a]);
            Pa.s.push_back(Pv.t[a + 4]);
            Pa.k.push_back(Pv.n[a + 4] + eps);
          }
          Pa.validate(b);
          IdentityReport conj = check_conj_AnAm(Pa, b, g, 1e-8);
          IdentityReport e7 = check_E7(Pv, b, g, 2, 1e-8);
          IdentityReport rep = conj;
          rep.lhs = conj.lhs / e7.lhs;
          rep.rhs = conj.rhs / e7.rhs;
          rep.tolerance = 1e-10;
          rep.rel_dev = std::max(std::abs(rep.lhs - 1.0), std::abs(rep.rhs - 1.0));
          rep.pass = rep.rel_dev <= rep.tolerance;
          rep.note = "A-type (1,1) case matches the second transformation";
          return rep;
        });
      });

  // ---- degeneration limits ----
  for (int r : {2, 3})
    add("rahman-r" + std::to_string(r), "limits",
        [r](ParamSampler& s, const CampaignOptions&) {
          cplx q = std::polar(s.uniform(0.30, 0.55), s.uniform(-0.5, 0.5));
          std::vector<cplx> t;
          for (int a = 0; a < 5; ++a) t.push_back(s.annulus(0.3, 0.75));
          return check_rahman(t, q, r, 1e-10);
        });
  for (int r : {2, 3})
    for (bool flip : {false, true})
      add(std::string("new-qbeta") + (flip ? "-flip" : "") + "-r" + std::to_string(r),
          "limits", [r, flip](ParamSampler& s, const CampaignOptions&) {
            cplx q = std::polar(s.uniform(0.30, 0.55), s.uniform(-0.5, 0.5));
            std::vector<cplx> t;
            for (int a = 0; a < 5; ++a) t.push_back(s.annulus(0.3, 0.75));
            return check_new_qbeta(t, q, r, flip, 1e-10);
          });
  for (int r : {2, 3})
    for (bool flip : {false, true})
      add(std::string("mellin-barnes") + (flip ? "-flip" : "") + "-r" + std::to_string(r),
          "limits", [r, flip](ParamSampler& s, const CampaignOptions&) {
            std::vector<double> u;
            for (int a = 0; a < 5; ++a) u.push_back(s.uniform(0.2, 0.6));
            return check_mellin_barnes(u, r, flip, 1e-8);
          });
  for (int r : {2, 3})
    add("smallp-rate-r" + std::to_string(r), "limits",
        [r](ParamSampler& s, const CampaignOptions&) {
          cplx z = s.annulus(0.4, 0.8);
          cplx q = std::polar(s.uniform(0.30, 0.45), s.uniform(-0.4, 0.4));
          return check_smallp_gamma_rate(z, q, r);
        });
  for (long eps : {0L, 1L})
    add("cm-scaling-e" + std::to_string(eps), "limits",
        [eps](ParamSampler&, const CampaignOptions&) { return check_cm_scaling(eps, 3); });

  // ---- properties ----
  add("prop-theta-addition", "properties",
      [](ParamSampler& s, const CampaignOptions&) { return property_theta_addition(s); });
  add("prop-gamma-quasiperiod", "properties", [](ParamSampler& s, const CampaignOptions&) {
    return property_gamma_quasiperiod(s);
  });
  add("prop-gamma-inversion", "properties",
      [](ParamSampler& s, const CampaignOptions&) { return property_gamma_inversion(s); });
  add("prop-gamma-pq-symmetry", "properties", [](ParamSampler& s, const CampaignOptions&) {
    return property_gamma_pq_symmetry(s);
  });
  add("prop-h-ellipticity", "properties",
      [](ParamSampler& s, const CampaignOptions&) { return property_h_ellipticity(s); });
  add("prop-delta-difference", "properties", [](ParamSampler& s, const CampaignOptions&) {
    return property_delta_difference(s);
  });
  add("prop-ggrel", "properties",
      [](ParamSampler& s, const CampaignOptions&) { return property_ggrel(s); });

  return es;
}

bool suite_selected(const std::string& suite, const std::string& entry_suite) {
  return suite == "all" || suite == entry_suite;
}

}  // namespace

bool id_matches(std::string_view filter, std::string_view id) {
  if (filter == id) return true;
  return id.size() > filter.size() && id.substr(0, filter.size()) == filter &&
         id[filter.size()] == '-';
}

std::vector<std::string> campaign_ids(const std::string& suite) {
  std::vector<std::string> ids;
  for (const auto& e : build_entries())
    if (suite_selected(suite, e.suite)) ids.push_back(e.id);
  return ids;
}

std::vector<IdentityReport> run_campaign(const CampaignOptions& opt,
                                         const ReportSink& sink) {
  if (opt.jobs > 0) set_default_jobs(opt.jobs);
  std::vector<IdentityReport> out;
  for (const auto& e : build_entries()) {
    if (!suite_selected(opt.suite, e.suite)) continue;
    if (!opt.only.empty() &&
        std::none_of(opt.only.begin(), opt.only.end(),
                     [&](const std::string& f) { return id_matches(f, e.id); }))
      continue;
    for (int d = 0; d < opt.draws; ++d) {
      SamplerConfig cfg = opt.sampler;
      cfg.seed = mix_seed(opt.sampler.seed, e.id, d);
      ParamSampler s(cfg);
      IdentityReport rep;
      try {
        rep = e.run(s, opt);
      } catch (const std::exception& ex) {
        rep.rel_dev = 9e99;
        rep.tolerance = 0.0;
        rep.pass = false;
        rep.note = std::string("error: ") + ex.what();
      }
      rep.identity_id = e.id;
      rep.seed = cfg.seed;
      if (e.suite == "conjectures") rep.conjecture = true;
      if (opt.tolerance_scale != 1.0 && opt.tolerance_scale > 0.0) {
        rep.tolerance *= opt.tolerance_scale;
        rep.pass = rep.rel_dev <= rep.tolerance;
      }
      if (sink) sink(rep);
      out.push_back(std::move(rep));
    }
  }
  return out;
}

}  // namespace rehf
