// Exhaustively check every endofunction on [4] against the d = 2 identity
// and print the aggregated report.
#include <iostream>

#include "splitcount/splitcount.hpp"

int main() {
  using namespace splitcount;

  VerifyReport report = exhaustive_verify(4, 2);
  std::cout << "checked " << report.count << " endofunctions\n";
  for (const auto& [id, tally] : report.tallies) {
    if (tally.applicable == 0) continue;
    std::cout << to_string(id) << ": " << tally.passed << "/" << tally.applicable
              << " passed\n";
  }
  std::cout << "failures: " << report.failed_total << "\n";
  return report.failed_total == 0 ? 0 : 1;
}
