#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dplab/energy.hpp"
#include "dplab/ledger.hpp"

namespace dplab {

struct SuiteConfig {
  std::uint64_t seed = 42;
  int samples = 10000;   // batch size of the sampled inequality properties
  double slack = 1e-12;  // admissible normalized margin
  std::vector<std::string> suites{"inequalities", "gradients", "ledger", "solver", "ccp"};
  LedgerOptions ledger;
};

struct PropertyResult {
  std::string id;
  bool pass = false;
  double worst_margin = 0.0;  // normalized; >= -slack passes
  std::string detail;         // worst sample or informational quotient
};

struct SuiteReport {
  std::vector<PropertyResult> results;
  bool all_pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
};

// Executes the selected property suites against the problem. Never mutates
// problem data; every property derives its own substream from the seed, so
// suite order cannot affect outcomes. Unknown suite names raise usage_error;
// nonpositive sample counts raise config_error.
SuiteReport run_suite(const SuiteConfig& cfg, const Problem& prob);

}  // namespace dplab
