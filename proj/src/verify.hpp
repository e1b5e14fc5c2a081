#ifndef MMX_VERIFY_HPP
#define MMX_VERIFY_HPP

#include <string>
#include <vector>

#include "bench.hpp"

namespace mmx {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;             // the measured quantities behind the verdict
  std::vector<std::string> notes;  // informational lines
  double seconds = 0.0;
  double time_limit = 0.0;
};

inline constexpr int kCriterionCount = 10;

CriterionResult run_criterion(int id);
// "acceptance" or "all" runs 1-10; "oracle", "restart", "aipe", "framework" run subsets; a number runs one.
std::vector<int> suite_criteria(const std::string& name);
std::string format_result(const CriterionResult& r);

// The sweeps behind the end-to-end criteria, exposed for the CLI and for inspection.
struct EndToEndData {
  std::vector<SweepResult> framework;  // one per seed
  std::vector<SweepResult> baseline;   // npe-restart on the same instances
};
RunConfig end_to_end_config(Method method, std::uint64_t seed);
std::vector<double> end_to_end_grid();
EndToEndData end_to_end_sweeps(int threads = 1);

}  // namespace mmx

#endif
