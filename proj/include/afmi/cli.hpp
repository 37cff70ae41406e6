#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "afmi/config.hpp"

namespace afmi {

struct CasePreset {
    int id;
    ModelParams params;  // xi included
    std::string summary;
};

// The six reproduction presets, ids 1..6.
const std::vector<CasePreset>& case_presets();
const CasePreset& case_preset(int id);  // throws ConfigError for unknown ids

// Equilibria, stability reports and case-specific extras for one preset.
json case_report(int id, unsigned threads = 0);

// Exit codes: 0 success, 2 usage or config error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace afmi
