// Acceptance run: one line per criterion, nonzero exit when a gated criterion fails.
// MULTIFRAC_ACCEPTANCE_BUDGET=quick shrinks the runs (verdicts then indicative only).

#include "multifrac/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main() {
  using namespace multifrac;
  const char* env = std::getenv("MULTIFRAC_ACCEPTANCE_BUDGET");
  const Budget budget = env ? parse_budget(env) : Budget::Full;
  const std::uint64_t seed = 20240601;
  int failed = 0;
  for (int id = 1; id <= 10; ++id) {
    const CriterionResult r = run_criterion(id, budget, seed);
    const char* tag = !r.gated ? "INFO" : r.passed ? "PASS" : "FAIL";
    std::printf("[%s] criterion %d: %s | %s (%.1f s)\n", tag, r.id, r.name.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    failed += r.gated && !r.passed;
  }
  std::printf("%d gated criteria failed (budget %s, seed %llu)\n", failed, to_string(budget),
              static_cast<unsigned long long>(seed));
  return failed == 0 ? 0 : 1;
}
