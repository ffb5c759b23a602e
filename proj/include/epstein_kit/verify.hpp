#pragma once

#include <string>
#include <vector>

#include "epstein_kit/core.hpp"

namespace ek {

struct CheckResult {
    std::string suite;
    std::string lemma;  // label of the identity under test
    std::string what;
    double value = 0;
    double tolerance = 0;
    bool at_least = false;  // pass iff value >= tolerance instead of <=
    bool pass = false;
    std::string note;  // exception text for checks that threw
};

std::vector<std::string> suite_names();
// Throws ConfigError for an unknown suite; "all" runs every suite.
std::vector<CheckResult> run_suite(const std::string& name);
std::string verify_table(const std::vector<CheckResult>& results);

}  // namespace ek
