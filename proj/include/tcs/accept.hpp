#pragma once

#include <string>
#include <vector>

namespace tcs {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;  // JSON payload for the report files
};

struct AcceptanceOptions {
  unsigned long seed = 20240921;
  bool quick = false;      // skip the Laakso k=3 full-pair sweep
  unsigned threads = 0;    // 0: hardware concurrency
  int tree_guard = 9;
  int laakso_guard = 4;
};

// Runs the full acceptance suite; one result per criterion, in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

}  // namespace tcs
