#ifndef MULTIFRAC_VERIFY_HPP
#define MULTIFRAC_VERIFY_HPP

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace multifrac {

/// Full runs the acceptance sizes. Quick shrinks grids and replica counts for smoke
/// tests; its verdicts are indicative only.
enum class Budget { Quick, Full };

Budget parse_budget(const std::string& s);
const char* to_string(Budget b);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool gated = true;  // false: reported, never fails the suite
  bool passed = false;
  std::string detail;
  nlohmann::json data;
  double seconds = 0.0;
};

struct SuiteReport {
  std::string suite;
  Budget budget = Budget::Full;
  std::uint64_t seed = 0;
  std::vector<CriterionResult> results;

  bool passed() const;
  nlohmann::json to_json() const;
};

/// Criterion ids per suite: levy {1,2,3,10}, brownian {4}, lfsm {5,6}, lmsm {7}, flp {8},
/// analytic {9}, all {1..10}. Throws Precondition for an unknown name.
std::vector<int> suite_criteria(const std::string& suite);
std::vector<std::string> suite_names();

CriterionResult run_criterion(int id, Budget budget, std::uint64_t seed);
SuiteReport run_suite(const std::string& suite, Budget budget, std::uint64_t seed);

/// Characteristic function of the symmetric power-law measure c |x|^{-1-alpha} on
/// D(eps, 1) plus a Gaussian of variance sigma2, over a time step dt, at theta.
double truncated_stable_cf(double alpha, double c, double eps, double sigma2, double dt, double theta);

}  // namespace multifrac

#endif  // MULTIFRAC_VERIFY_HPP
