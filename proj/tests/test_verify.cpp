#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "rehf/verify.hpp"
#include "testutil.hpp"

using rehf::cplx;
using testutil::rel;

namespace {

const cplx kP{0.17, 0.06};
const cplx kQ{0.11, -0.08};

rehf::BalancedParams beta6_pack(const rehf::Bases& b, long eps) {
  rehf::BalancedParams P;
  P.kind = rehf::ParamKind::Beta6;
  P.eps = eps;
  P.t = {cplx(0.61, 0.12), cplx(0.42, -0.38), cplx(-0.55, 0.11), cplx(0.35, 0.43),
         cplx(0.62, 0.07)};
  cplx prod{1.0, 0.0};
  for (cplx v : P.t) prod *= v;
  P.t.push_back(b.pq / prod);
  P.n = {1, -2, 0, 2, -1};
  P.n.push_back(-3 * eps);
  return P;
}

rehf::GridSpec grid64(double tol = 1e-10) {
  rehf::GridSpec g;
  g.points_per_dim = 64;
  g.target_rel = tol;
  return g;
}

}  // namespace

TEST_CASE("sampler is deterministic at a fixed seed") {
  rehf::SamplerConfig cfg;
  rehf::ParamSampler s1(cfg);
  rehf::ParamSampler s2(cfg);
  rehf::Bases b1 = s1.bases(2);
  rehf::Bases b2 = s2.bases(2);
  CHECK(b1.p == b2.p);
  CHECK(b1.q == b2.q);
  auto P1 = s1.draw(rehf::ParamKind::V8, 1, b1, 1);
  auto P2 = s2.draw(rehf::ParamKind::V8, 1, b2, 1);
  REQUIRE(P1.t.size() == 8);
  REQUIRE(P2.t.size() == 8);
  for (std::size_t a = 0; a < 8; ++a) CHECK(P1.t[a] == P2.t[a]);
  CHECK(P1.n == P2.n);

  cfg.seed = 7;
  rehf::ParamSampler s3(cfg);
  CHECK(s3.bases(2).p != b1.p);
}

TEST_CASE("draws satisfy the continuous and discrete balancing") {
  rehf::ParamSampler s{rehf::SamplerConfig{}};
  rehf::Bases b = s.bases(3);

  auto B = s.draw(rehf::ParamKind::Beta6, 1, b, 1);
  cplx prod{1.0, 0.0};
  long nsum = 0;
  for (cplx v : B.t) prod *= v;
  for (long n : B.n) nsum += n;
  CHECK(rel(prod, b.pq) < 1e-13);
  CHECK(nsum == -3);
  CHECK_NOTHROW(B.validate(b));

  auto V = s.draw(rehf::ParamKind::V8, 1, b, 0);
  prod = cplx{1.0, 0.0};
  nsum = 0;
  for (cplx v : V.t) prod *= v;
  for (long n : V.n) nsum += n;
  CHECK(rel(prod, b.pq * b.pq) < 1e-13);
  CHECK(nsum == 0);

  auto T = s.draw(rehf::ParamKind::TypeII_Cn, 2, b, 1);
  prod = rehf::ipow(T.t_cross, 2);
  nsum = 2 * T.n_cross;
  for (cplx v : T.t) prod *= v;
  for (long n : T.n) nsum += n;
  CHECK(rel(prod, b.pq) < 1e-13);
  CHECK(nsum == -3);
}

TEST_CASE("windowed and balanced draws keep magnitudes inside the window") {
  rehf::ParamSampler s{rehf::SamplerConfig{}};
  rehf::Bases b = s.bases(2);

  double w0 = std::pow(std::abs(b.pq), 1.0 / 6.0);
  auto W = s.draw_window(rehf::ParamKind::Beta6, 1, b, 0, 0.75 * w0, 1.3 * w0);
  for (cplx v : W.t) {
    CHECK(std::abs(v) >= 0.75 * w0 - 1e-12);
    CHECK(std::abs(v) <= 1.3 * w0 + 1e-12);
  }

  auto Bal = s.draw_balanced(rehf::ParamKind::V8, 1, b, 1);
  double wb = std::pow(std::abs(b.pq * b.pq), 1.0 / 8.0);
  for (cplx v : Bal.t) {
    CHECK(std::abs(v) >= 0.85 * wb - 1e-12);
    CHECK(std::abs(v) <= 1.15 * wb + 1e-12);
  }
}

TEST_CASE("report lines are valid json with a stable schema") {
  rehf::Bases b(kP, kQ, 2);
  auto rep = rehf::check_rfint(beta6_pack(b, 1), b, grid64());
  auto j = nlohmann::json::parse(rehf::to_json_line(rep));
  CHECK(j["identity_id"] == "rfint");
  CHECK(j["pass"].is_boolean());
  CHECK(j["conjecture"] == false);
  CHECK(j["rel_dev"].is_number());
  CHECK(j["tolerance"] == 1e-8);
  CHECK(j["lhs"].size() == 2);
  CHECK(j["params"]["kind"] == "Beta6");
  CHECK(j["params"]["t"].size() == 6);
  CHECK(j["params"]["n"].size() == 6);
  CHECK(j["params"]["eps"] == 1);
  CHECK(j["bases"]["r"] == 2);
  CHECK(j["grid_used"].is_number_integer());
  CHECK(j["wall_time_ms"].is_number());
}

TEST_CASE("rarefied beta check passes at pinned parameters") {
  rehf::Bases b(kP, kQ, 2);
  auto rep = rehf::check_rfint(beta6_pack(b, 1), b, grid64());
  CHECK(rep.pass);
  CHECK(rep.rel_dev < 1e-10);
}

TEST_CASE("transformation roundtrip check at pinned parameters") {
  rehf::Bases b(kP, kQ, 2);
  rehf::BalancedParams P;
  P.kind = rehf::ParamKind::V8;
  P.eps = 1;
  P.t = {cplx(0.61, 0.12), cplx(0.42, -0.38), cplx(-0.55, 0.11), cplx(0.35, 0.43),
         cplx(0.62, 0.07), cplx(-0.38, -0.29), cplx(0.51, -0.21)};
  cplx prod{1.0, 0.0};
  for (cplx v : P.t) prod *= v;
  P.t.push_back(b.pq * b.pq / prod);
  P.n = {1, -2, 0, 2, -1, 1, 0};
  P.n.push_back(-1 - 4);
  auto rep = rehf::check_E7_roundtrip(P, b);
  CHECK(rep.pass);
  CHECK(rep.rel_dev < 1e-12);
}

TEST_CASE("degeneration checks pass at pinned parameters") {
  const std::vector<cplx> t{cplx(0.52, 0.21), cplx(0.44, -0.35), cplx(-0.47, 0.18),
                            cplx(0.38, 0.41), cplx(0.58, 0.09)};
  auto rah = rehf::check_rahman(t, cplx(0.41, 0.13), 2);
  CHECK(rah.pass);
  CHECK(rah.rel_dev < 1e-12);

  const std::vector<double> u{0.25, 0.40, 0.31, 0.55, 0.47};
  auto mb = rehf::check_mellin_barnes(u, 3, false);
  CHECK(mb.pass);
  CHECK(mb.rel_dev < 1e-10);
}

TEST_CASE("property suite entry runs its full sample budget") {
  rehf::ParamSampler s{rehf::SamplerConfig{}};
  auto rep = rehf::property_theta_addition(s, 50);
  CHECK(rep.pass);
  CHECK(rep.note.find("50 samples") != std::string::npos);
}

TEST_CASE("campaign suites expose disjoint identity lists") {
  auto proven = rehf::campaign_ids("proven");
  auto conj = rehf::campaign_ids("conjectures");
  auto limits = rehf::campaign_ids("limits");
  auto props = rehf::campaign_ids("properties");
  CHECK(proven.size() == 29);
  CHECK(conj.size() == 11);
  CHECK(limits.size() == 14);
  CHECK(props.size() == 7);
  CHECK(rehf::campaign_ids("all").size() ==
        proven.size() + conj.size() + limits.size() + props.size());
  CHECK(std::count(proven.begin(), proven.end(), "rfint-r2-e1") == 1);
  CHECK(std::count(conj.begin(), conj.end(), "cdcm-11-r2") == 1);
}

TEST_CASE("campaign runs are reproducible at a fixed seed") {
  rehf::CampaignOptions opt;
  opt.suite = "properties";
  int sunk = 0;
  auto first = rehf::run_campaign(opt, [&](const rehf::IdentityReport&) { ++sunk; });
  auto second = rehf::run_campaign(opt);
  REQUIRE(first.size() == 7);
  CHECK(sunk == 7);
  REQUIRE(second.size() == first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].identity_id == second[i].identity_id);
    CHECK(first[i].rel_dev == second[i].rel_dev);
    CHECK(first[i].lhs == second[i].lhs);
    CHECK(first[i].seed == second[i].seed);
    CHECK(first[i].pass);
  }
}
