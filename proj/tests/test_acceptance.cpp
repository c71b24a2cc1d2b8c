// Acceptance gate: one line per criterion, nonzero exit when any fails.
#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "rehf/verify.hpp"

namespace {

using rehf::CampaignOptions;
using rehf::IdentityReport;

struct Criterion {
  std::string label;
  double tol;
  bool pass = true;
  bool ran = false;
  double worst = 0.0;
  double slowest_ms = 0.0;
  int checks = 0;
};

std::vector<IdentityReport> run(const CampaignOptions& opt) {
  return rehf::run_campaign(opt);
}

CampaignOptions select(std::string suite, std::vector<std::string> only, int draws = 1,
                       double tol_scale = 1.0) {
  CampaignOptions opt;
  opt.suite = std::move(suite);
  opt.only = std::move(only);
  opt.draws = draws;
  opt.tolerance_scale = tol_scale;
  return opt;
}

// folds reports in; every report must pass, run at a tolerance no looser than
// need_tol, and respect the optional per-draw time and grid budgets
void fold(Criterion& c, const std::vector<IdentityReport>& reps, double need_tol,
          double max_ms = 0.0, int max_grid = 0) {
  for (const auto& rep : reps) {
    c.ran = true;
    ++c.checks;
    c.worst = std::max(c.worst, rep.rel_dev);
    c.slowest_ms = std::max(c.slowest_ms, rep.wall_ms);
    if (!rep.pass || rep.tolerance > need_tol * (1.0 + 1e-9)) c.pass = false;
    if (max_ms > 0.0 && rep.wall_ms > max_ms) c.pass = false;
    if (max_grid > 0 && rep.grid_used > max_grid) c.pass = false;
  }
}

bool has_passing(const std::vector<IdentityReport>& reps, const std::string& id) {
  return std::any_of(reps.begin(), reps.end(), [&](const IdentityReport& rep) {
    return rep.identity_id == id && rep.pass;
  });
}

}  // namespace

int main() {
  int failures = 0;
  int index = 0;
  auto line = [&](Criterion& c) {
    ++index;
    if (!c.ran) c.pass = false;
    std::printf("criterion %02d %s  %s (tol %.0e): %d checks, worst rel_dev %.3e, "
                "slowest draw %.2f s\n",
                index, c.pass ? "pass" : "FAIL", c.label.c_str(), c.tol, c.checks,
                c.worst, c.slowest_ms / 1000.0);
    std::fflush(stdout);
    if (!c.pass) ++failures;
  };

  {
    Criterion c{"classical beta integral, 20 narrow-window draws", 1e-10};
    CampaignOptions opt = select("proven", {"rfint-r1-e0"}, 20, 0.01);
    opt.sampler.p_mag_hi = 0.2;
    opt.sampler.q_mag_hi = 0.2;
    opt.sampler.t_mag_cap = 0.8;
    fold(c, run(opt), c.tol, 2000.0);
    line(c);
  }
  {
    Criterion c{"rarefied beta integral over r in {1,2,3} and eps in {0,1}", 1e-8};
    fold(c, run(select("proven", {"rfint-r1", "rfint-r2", "rfint-r3"}, 10)), c.tol,
         10000.0);
    line(c);
  }
  {
    Criterion c{"rank-2 type I and type II sum-integrals at r=2", 1e-6};
    fold(c, run(select("proven", {"typeI-c2", "typeII-c2"}, 3)), c.tol, 600000.0, 512);
    line(c);
  }
  {
    Criterion c{"all three 8-parameter reflection transformations", 1e-8};
    auto reps = run(select("proven", {"e7trafo1", "e7trafo2", "e7trafo3"}));
    fold(c, reps, c.tol);
    if (!has_passing(reps, "e7trafo1-r2-mixed")) c.pass = false;
    line(c);
  }
  {
    Criterion c{"contiguous relation and hypergeometric equation", 1e-7};
    auto reps = run(select("proven", {"cont1", "reheq"}, 10));
    fold(c, reps, c.tol);
    if (!has_passing(reps, "reheq-sym-r1") || !has_passing(reps, "reheq-sym-r2"))
      c.pass = false;
    line(c);
  }
  {
    Criterion c{"q-beta, Mellin-Barnes, and Rahman degenerations", 1e-10};
    fold(c, run(select("limits", {"new-qbeta", "rahman"})), 1e-10);
    fold(c, run(select("limits", {"mellin-barnes"})), 1e-8);
    line(c);
  }
  {
    Criterion c{"small-p asymptotic slopes", 1e-1};
    fold(c, run(select("limits", {"smallp-rate", "cm-scaling-e1"})), c.tol);
    line(c);
  }
  {
    Criterion c{"conjectured transformations with reflection agreements", 1e-6};
    auto reps = run(select("conjectures", {}));
    fold(c, reps, c.tol);
    for (const char* id :
         {"cdcm-11-vs-e7trafo3", "typeii-cd1-vs-e7trafo1", "anam-11-vs-e7trafo2"}) {
      bool ok = std::any_of(reps.begin(), reps.end(), [&](const IdentityReport& rep) {
        return rep.identity_id == id && rep.pass && rep.tolerance <= 1.0001e-10;
      });
      if (!ok) c.pass = false;
    }
    line(c);
  }
  {
    Criterion c{"difference operator null vector and symmetry", 1e-8};
    fold(c, run(select("proven", {"vandiejen-null"})), 1e-13);
    fold(c, run(select("proven", {"vandiejen-sym"})), 1e-8);
    line(c);
  }
  {
    Criterion c{"property suites at 50 samples each", 1.0};
    auto reps = run(select("properties", {}));
    fold(c, reps, c.tol);
    double total_ms = 0.0;
    for (const auto& rep : reps) {
      total_ms += rep.wall_ms;
      if (rep.note.find("50 samples") == std::string::npos) c.pass = false;
    }
    if (total_ms > 300000.0) c.pass = false;
    line(c);
  }

  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
