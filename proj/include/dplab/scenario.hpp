#pragma once

#include <string>

#include "dplab/config.hpp"

namespace dplab {

// Exit-code contract: 0 success, 1 property/assertion failure,
// 2 configuration error, 3 numeric error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;

// Executes the configured scenario and writes every report (CSV tables,
// JSON ledger, plain-text summary) under output_dir. Nothing is written
// anywhere else. Exceptions are mapped to the exit-code contract.
int run_scenario(const RunConfig& cfg, const std::string& output_dir);

}  // namespace dplab
