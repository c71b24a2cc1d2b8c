#include "config.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "rehf/errors.hpp"

namespace rehftool {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(int lineno, const std::string& what) {
  throw rehf::domain_error("config line " + std::to_string(lineno) + ": " + what);
}

double to_double(const std::string& v, int lineno) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) bad(lineno, "trailing characters in number '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    bad(lineno, "bad number '" + v + "'");
  }
}

long to_long(const std::string& v, int lineno) {
  try {
    std::size_t used = 0;
    long x = std::stol(v, &used);
    if (used != v.size()) bad(lineno, "trailing characters in integer '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    bad(lineno, "bad integer '" + v + "'");
  }
}

std::array<double, 2> to_pair(const std::string& v, int lineno) {
  std::istringstream in(v);
  std::array<double, 2> x{};
  if (!(in >> x[0] >> x[1])) bad(lineno, "expected two numbers in '" + v + "'");
  std::string rest;
  if (in >> rest) bad(lineno, "trailing characters in '" + v + "'");
  return x;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

CampaignConfig parse_campaign_config(std::istream& in) {
  CampaignConfig c;
  std::string section;  // "", "sampler", or an identity id
  IdentityOverride* ov = nullptr;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad(lineno, "unterminated section header");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "sampler") {
        section = "sampler";
        ov = nullptr;
      } else if (name.rfind("identity ", 0) == 0) {
        std::string id = trim(name.substr(9));
        if (id.empty()) bad(lineno, "empty identity id");
        section = "identity";
        c.identities.push_back({id});
        ov = &c.identities.back();
      } else {
        bad(lineno, "unknown section [" + name + "]");
      }
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) bad(lineno, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (section.empty()) {
      if (key == "suite") {
        if (val != "proven" && val != "conjectures" && val != "limits" &&
            val != "properties" && val != "all")
          bad(lineno, "unknown suite '" + val + "'");
        c.suite = val;
      } else if (key == "output") {
        c.output_path = val;
      } else if (key == "draws") {
        c.draws = static_cast<int>(to_long(val, lineno));
      } else if (key == "tolerance_scale") {
        c.tolerance_scale = to_double(val, lineno);
      } else if (key == "grid") {
        c.grid = static_cast<int>(to_long(val, lineno));
      } else if (key == "jobs") {
        c.jobs = static_cast<int>(to_long(val, lineno));
      } else {
        bad(lineno, "unknown key '" + key + "'");
      }
    } else if (section == "sampler") {
      if (key == "seed") {
        try {
          c.sampler.seed = std::stoull(val);
        } catch (const std::logic_error&) {
          bad(lineno, "bad seed '" + val + "'");
        }
      } else if (key == "p_mag") {
        auto x = to_pair(val, lineno);
        c.sampler.p_mag_lo = x[0];
        c.sampler.p_mag_hi = x[1];
      } else if (key == "q_mag") {
        auto x = to_pair(val, lineno);
        c.sampler.q_mag_lo = x[0];
        c.sampler.q_mag_hi = x[1];
      } else if (key == "phase_cap") {
        c.sampler.phase_cap = to_double(val, lineno);
      } else if (key == "t_mag") {
        auto x = to_pair(val, lineno);
        c.sampler.t_mag_lo = x[0];
        c.sampler.t_mag_cap = x[1];
      } else if (key == "n_abs_cap") {
        c.sampler.n_abs_cap = to_long(val, lineno);
      } else if (key == "resample_limit") {
        c.sampler.resample_limit = static_cast<int>(to_long(val, lineno));
      } else {
        bad(lineno, "unknown sampler key '" + key + "'");
      }
    } else {
      if (key == "draws") {
        ov->draws = static_cast<int>(to_long(val, lineno));
      } else if (key == "tolerance_scale") {
        ov->tolerance_scale = to_double(val, lineno);
      } else if (key == "grid") {
        ov->grid = static_cast<int>(to_long(val, lineno));
      } else {
        bad(lineno, "unknown identity key '" + key + "'");
      }
    }
  }
  return c;
}

CampaignConfig load_campaign_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rehf::domain_error("config: cannot open " + path);
  return parse_campaign_config(in);
}

std::string serialize_campaign_config(const CampaignConfig& c) {
  std::ostringstream out;
  out << "suite = " << c.suite << "\n";
  out << "output = " << c.output_path << "\n";
  out << "draws = " << c.draws << "\n";
  out << "tolerance_scale = " << fmt(c.tolerance_scale) << "\n";
  out << "grid = " << c.grid << "\n";
  out << "jobs = " << c.jobs << "\n";
  out << "\n[sampler]\n";
  out << "seed = " << c.sampler.seed << "\n";
  out << "p_mag = " << fmt(c.sampler.p_mag_lo) << " " << fmt(c.sampler.p_mag_hi) << "\n";
  out << "q_mag = " << fmt(c.sampler.q_mag_lo) << " " << fmt(c.sampler.q_mag_hi) << "\n";
  out << "phase_cap = " << fmt(c.sampler.phase_cap) << "\n";
  out << "t_mag = " << fmt(c.sampler.t_mag_lo) << " " << fmt(c.sampler.t_mag_cap) << "\n";
  out << "n_abs_cap = " << c.sampler.n_abs_cap << "\n";
  out << "resample_limit = " << c.sampler.resample_limit << "\n";
  for (const auto& ov : c.identities) {
    out << "\n[identity " << ov.id << "]\n";
    if (ov.draws > 0) out << "draws = " << ov.draws << "\n";
    if (ov.tolerance_scale > 0.0)
      out << "tolerance_scale = " << fmt(ov.tolerance_scale) << "\n";
    if (ov.grid > 0) out << "grid = " << ov.grid << "\n";
  }
  return out.str();
}

}  // namespace rehftool
