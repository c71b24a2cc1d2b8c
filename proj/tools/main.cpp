#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "rehf/ellgamma.hpp"
#include "rehf/errors.hpp"
#include "rehf/evaluator.hpp"
#include "rehf/qseries.hpp"
#include "rehf/rargamma.hpp"
#include "rehf/verify.hpp"

namespace {

using rehf::cplx;

// accepted forms: "re", "re,im", "mag@phase" (phase in radians), each optionally
// wrapped in parentheses so negative reals survive option parsing
cplx parse_cplx(std::string s) {
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  std::size_t used = 0;
  auto num = [&](const std::string& part) {
    double x = std::stod(part, &used);
    if (used != part.size()) throw std::invalid_argument("bad number '" + part + "'");
    return x;
  };
  auto at = s.find('@');
  if (at != std::string::npos)
    return std::polar(num(s.substr(0, at)), num(s.substr(at + 1)));
  auto comma = s.find(',');
  if (comma == std::string::npos) return cplx(num(s), 0.0);
  return cplx(num(s.substr(0, comma)), num(s.substr(comma + 1)));
}

std::string fmt_cplx(cplx v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%.15g, %.15g]", v.real(), v.imag());
  return buf;
}

std::vector<long> parse_longs(const std::string& s) {
  std::vector<long> out;
  std::size_t pos = 0;
  while (pos <= s.size() && !s.empty()) {
    auto comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    std::size_t used = 0;
    std::string part = s.substr(pos, comma - pos);
    out.push_back(std::stol(part, &used));
    if (used != part.size()) throw std::invalid_argument("bad integer '" + part + "'");
    pos = comma + 1;
  }
  return out;
}

struct EvalFlags {
  std::string fn;
  std::vector<std::string> args;
  std::string p, q, n;
  int r = 1;
  long eps = 0;
  int grid = 64;
};

int run_eval(const EvalFlags& f) {
  if (f.p.empty()) {
    std::cerr << "eval: --p is required\n";
    return 2;
  }
  cplx p = parse_cplx(f.p);
  cplx q{};
  auto need = [&](std::size_t count) {
    if (f.args.size() != count)
      throw std::invalid_argument("eval " + f.fn + ": expected " +
                                  std::to_string(count) + " positional arguments");
  };
  auto need_q = [&] {
    if (f.q.empty()) throw std::invalid_argument("eval " + f.fn + ": --q is required");
    q = parse_cplx(f.q);
  };
  cplx value;
  if (f.fn == "theta") {
    need(1);
    value = rehf::theta(parse_cplx(f.args[0]), p);
  } else if (f.fn == "qpoch") {
    need(1);
    value = rehf::qpochhammer_inf(parse_cplx(f.args[0]), p);
  } else if (f.fn == "gamma") {
    need(1);
    need_q();
    value = rehf::elliptic_gamma(parse_cplx(f.args[0]), p, q);
  } else if (f.fn == "gamma2") {
    need(2);
    need_q();
    value = rehf::elliptic_gamma2(parse_cplx(f.args[0]), p, q, parse_cplx(f.args[1]));
  } else if (f.fn == "gamma_rarefied") {
    need(2);
    need_q();
    rehf::Bases b(p, q, f.r);
    std::size_t used = 0;
    long m = std::stol(f.args[1], &used);
    if (used != f.args[1].size())
      throw std::invalid_argument("bad integer '" + f.args[1] + "'");
    value = rehf::gamma_rarefied(parse_cplx(f.args[0]), m, b);
  } else if (f.fn == "V" || f.fn == "beta_lhs" || f.fn == "beta_rhs") {
    need_q();
    const std::size_t count = f.fn == "V" ? 8 : 6;
    need(count);
    rehf::Bases b(p, q, f.r);
    rehf::BalancedParams P;
    P.kind = count == 8 ? rehf::ParamKind::V8 : rehf::ParamKind::Beta6;
    P.eps = f.eps;
    for (const auto& t : f.args) P.t.push_back(parse_cplx(t));
    P.n = parse_longs(f.n);
    if (P.n.size() != count)
      throw std::invalid_argument("eval " + f.fn + ": --n needs " +
                                  std::to_string(count) + " comma-separated integers");
    P.validate(b);
    rehf::GridSpec g;
    g.points_per_dim = f.grid;
    if (f.fn == "beta_rhs") {
      value = rehf::eval_rhs(P, b);
    } else if (f.fn == "V") {
      value = rehf::eval_V(P, b, g).value;
    } else {
      rehf::SumIntegralSpec spec{P, b, g, {}};
      value = rehf::eval_lhs(spec).value;
    }
  } else {
    std::cerr << "eval: unknown function '" << f.fn
              << "' (theta qpoch gamma gamma2 gamma_rarefied V beta_lhs beta_rhs)\n";
    return 2;
  }
  std::cout << fmt_cplx(value) << "\n";
  return 0;
}

struct VerifyFlags {
  std::string config_path, suite, output;
  std::vector<std::string> only;
  std::uint64_t seed = 0;
  int jobs = 0, draws = 0, grid = 0;
  double tolerance_scale = 0.0;
  bool seed_set = false, suite_set = false, output_set = false, jobs_set = false,
       draws_set = false, grid_set = false, tol_set = false, dump = false;
};

int run_verify(const VerifyFlags& f) {
  rehftool::CampaignConfig cfg;
  if (!f.config_path.empty()) cfg = rehftool::load_campaign_config(f.config_path);
  if (f.suite_set) cfg.suite = f.suite;
  if (f.seed_set) cfg.sampler.seed = f.seed;
  if (f.jobs_set) cfg.jobs = f.jobs;
  if (f.draws_set) cfg.draws = f.draws;
  if (f.grid_set) cfg.grid = f.grid;
  if (f.tol_set) cfg.tolerance_scale = f.tolerance_scale;
  if (f.output_set) cfg.output_path = f.output;
  for (const auto& id : f.only) cfg.identities.push_back({id});
  if (f.dump) {
    std::cout << rehftool::serialize_campaign_config(cfg);
    return 0;
  }

  auto known = rehf::campaign_ids(cfg.suite);
  for (const auto& ov : cfg.identities) {
    bool any = std::any_of(known.begin(), known.end(), [&](const std::string& id) {
      return rehf::id_matches(ov.id, id);
    });
    if (!any) {
      std::cerr << "verify: identity '" << ov.id << "' matches nothing in suite "
                << cfg.suite << "\n";
      return 2;
    }
  }

  std::ofstream out(cfg.output_path);
  if (!out) {
    std::cerr << "verify: cannot open " << cfg.output_path << "\n";
    return 2;
  }

  rehf::CampaignOptions base;
  base.suite = cfg.suite;
  base.sampler = cfg.sampler;
  base.draws = cfg.draws;
  base.tolerance_scale = cfg.tolerance_scale;
  base.grid_points = cfg.grid;
  base.jobs = cfg.jobs;
  std::vector<rehf::CampaignOptions> runs;
  if (cfg.identities.empty()) {
    runs.push_back(base);
  } else {
    for (const auto& ov : cfg.identities) {
      rehf::CampaignOptions o = base;
      o.only = {ov.id};
      if (ov.draws > 0) o.draws = ov.draws;
      if (ov.tolerance_scale > 0.0) o.tolerance_scale = ov.tolerance_scale;
      if (ov.grid > 0) o.grid_points = ov.grid;
      runs.push_back(o);
    }
  }

  struct Row {
    int draws = 0;
    double worst = 0.0;
    double tol = 0.0;
    bool pass = true;
    bool conj = false;
  };
  std::vector<std::string> order;
  std::map<std::string, Row> rows;
  int total = 0, failures = 0, deviations = 0;
  for (const auto& o : runs) {
    rehf::run_campaign(o, [&](const rehf::IdentityReport& rep) {
      out << rehf::to_json_line(rep) << "\n" << std::flush;
      auto [it, fresh] = rows.try_emplace(rep.identity_id);
      if (fresh) order.push_back(rep.identity_id);
      Row& row = it->second;
      ++row.draws;
      row.worst = std::max(row.worst, rep.rel_dev);
      row.tol = rep.tolerance;
      row.conj = rep.conjecture;
      if (!rep.pass) row.pass = false;
      ++total;
      if (!rep.pass) ++(rep.conjecture ? deviations : failures);
    });
  }

  std::printf("%-28s %5s %14s %10s  %s\n", "identity", "draws", "worst rel_dev",
              "tolerance", "status");
  for (const auto& id : order) {
    const Row& row = rows.at(id);
    const char* status = row.conj ? (row.pass ? "consistent" : "DEVIATES")
                                  : (row.pass ? "pass" : "FAIL");
    std::printf("%-28s %5d %14.3e %10.1e  %s\n", id.c_str(), row.draws, row.worst,
                row.tol, status);
  }
  std::printf("checks: %d, failures: %d, conjecture deviations: %d\n", total, failures,
              deviations);
  std::printf("report: %s\n", cfg.output_path.c_str());
  return failures == 0 ? 0 : 1;
}

struct ReportFlags {
  std::string path, csv;
};

int run_report(const ReportFlags& f) {
  std::ifstream in(f.path);
  if (!in) {
    std::cerr << "report: cannot open " << f.path << "\n";
    return 2;
  }
  struct Rec {
    std::string id;
    int r = 0;
    long eps = 0;
    bool pass = false;
    bool conj = false;
    double rel = 0.0;
    int grid = 0;
  };
  std::vector<Rec> recs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      recs.push_back({j.at("identity_id").get<std::string>(),
                      j.at("bases").at("r").get<int>(),
                      j.at("params").at("eps").get<long>(), j.at("pass").get<bool>(),
                      j.value("conjecture", false), j.at("rel_dev").get<double>(),
                      j.value("grid_used", 0)});
    } catch (const std::exception& e) {
      std::cerr << "report: malformed record at line " << lineno << ": " << e.what()
                << "\n";
      return 2;
    }
  }
  int passes = 0, fails = 0, conj = 0;
  for (const Rec& rec : recs) {
    ++(rec.pass ? passes : fails);
    if (rec.conj) ++conj;
  }
  std::printf("records: %zu (pass %d, fail %d, conjecture %d)\n", recs.size(), passes,
              fails, conj);
  if (recs.empty()) return 0;

  std::set<std::pair<int, long>> cols;
  for (const Rec& rec : recs) cols.insert({rec.r, rec.eps});
  std::vector<std::string> order;
  std::map<std::string, std::map<std::pair<int, long>, bool>> matrix;
  for (const Rec& rec : recs) {
    auto [it, fresh] = matrix.try_emplace(rec.id);
    if (fresh) order.push_back(rec.id);
    auto [cell, first] = it->second.try_emplace({rec.r, rec.eps}, true);
    cell->second = cell->second && rec.pass;
  }
  std::printf("%-28s", "identity");
  for (const auto& [r, eps] : cols) std::printf(" %7s", ("r" + std::to_string(r) + " e" + std::to_string(eps)).c_str());
  std::printf("\n");
  for (const auto& id : order) {
    std::printf("%-28s", id.c_str());
    const auto& row = matrix.at(id);
    for (const auto& col : cols) {
      auto it = row.find(col);
      std::printf(" %7s", it == row.end() ? "-" : (it->second ? "pass" : "FAIL"));
    }
    std::printf("\n");
  }

  if (!f.csv.empty()) {
    std::ofstream csv(f.csv);
    if (!csv) {
      std::cerr << "report: cannot open " << f.csv << "\n";
      return 2;
    }
    csv << "identity_id,r,eps,grid_used,rel_dev\n";
    for (const Rec& rec : recs)
      csv << rec.id << "," << rec.r << "," << rec.eps << "," << rec.grid << ","
          << rec.rel << "\n";
    std::printf("csv: %s\n", f.csv.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rarefied elliptic hypergeometric function evaluator and identity verifier"};
  app.require_subcommand(1);

  EvalFlags ef;
  CLI::App* eval = app.add_subcommand(
      "eval", "evaluate a special function; complex arguments are re,im or mag@phase");
  eval->add_option("function", ef.fn,
                   "theta | qpoch | gamma | gamma2 | gamma_rarefied | V | beta_lhs | "
                   "beta_rhs");
  eval->add_option("args", ef.args, "positional arguments of the function");
  eval->add_option("--p", ef.p, "base p as re,im or mag@phase");
  eval->add_option("--q", ef.q, "base q as re,im or mag@phase");
  eval->add_option("--r", ef.r, "lens level r")->check(CLI::PositiveNumber);
  eval->add_option("--eps", ef.eps, "discrete twist parameter");
  eval->add_option("--n", ef.n, "comma-separated discrete parameters");
  eval->add_option("--grid", ef.grid, "quadrature points per dimension");

  VerifyFlags vf;
  CLI::App* verify = app.add_subcommand(
      "verify",
      "run a verification campaign; exits 0 when every non-conjecture check passes");
  auto* oc = verify->add_option("--config", vf.config_path, "campaign config file");
  auto* os = verify->add_option("--suite", vf.suite,
                                "proven | conjectures | limits | properties | all");
  auto* oseed = verify->add_option("--seed", vf.seed, "sampler seed");
  auto* oj = verify->add_option("--jobs", vf.jobs, "worker parallelism bound");
  auto* od = verify->add_option("--draws", vf.draws, "draws per identity");
  auto* og = verify->add_option("--grid", vf.grid, "quadrature points override");
  auto* ot = verify->add_option("--tolerance-scale", vf.tolerance_scale,
                                "multiply every per-identity tolerance");
  auto* oo = verify->add_option("--output", vf.output, "JSON-lines report path");
  verify->add_option("--only", vf.only, "identity id or dash prefix, repeatable");
  verify->add_flag("--dump-config", vf.dump,
                   "print the effective campaign config and exit");

  ReportFlags rf;
  CLI::App* report =
      app.add_subcommand("report", "digest a JSON-lines report produced by verify");
  report->add_option("path", rf.path, "report file")->required();
  report->add_option("--csv", rf.csv, "write rel_dev vs grid CSV to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n";
    return 2;
  }
  vf.suite_set = os->count() > 0;
  vf.seed_set = oseed->count() > 0;
  vf.jobs_set = oj->count() > 0;
  vf.draws_set = od->count() > 0;
  vf.grid_set = og->count() > 0;
  vf.tol_set = ot->count() > 0;
  vf.output_set = oo->count() > 0;
  (void)oc;

  try {
    if (eval->parsed()) return run_eval(ef);
    if (verify->parsed()) return run_verify(vf);
    if (report->parsed()) return run_report(rf);
  } catch (const rehf::convergence_error& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (const rehf::error& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
