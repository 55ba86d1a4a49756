#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace perfhom {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Benchmark configuration used by the determinism criterion (kept equal to configs/benchmark.yaml).
extern const char* const kBenchmarkConfig;

/// Runs the acceptance criteria (all when `only` is empty), printing one PASS/FAIL line each.
std::vector<CriterionResult> run_acceptance(std::ostream& log, int workers = 1, const std::vector<int>& only = {});

}  // namespace perfhom
