#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rehf/verify.hpp"

namespace rehftool {

struct IdentityOverride {
  std::string id;  // exact identity id or dash-delimited prefix
  int draws = 0;   // 0: inherit the campaign default
  double tolerance_scale = 0.0;
  int grid = 0;
};

// Campaign definition: global run options, sampler windows, and an optional
// identity list with per-identity overrides. An empty list runs the whole
// suite.
struct CampaignConfig {
  std::string suite = "proven";
  std::string output_path = "report.jsonl";
  int draws = 1;
  double tolerance_scale = 1.0;
  int grid = 0;
  int jobs = 0;
  rehf::SamplerConfig sampler;
  std::vector<IdentityOverride> identities;
};

// Key-value text with [sampler] and [identity <id>] sections; '#' comments.
// Throws rehf::domain_error on unknown keys or malformed values.
CampaignConfig parse_campaign_config(std::istream& in);
CampaignConfig load_campaign_config(const std::string& path);
std::string serialize_campaign_config(const CampaignConfig& c);

}  // namespace rehftool
