// Acceptance battery: prints one pass/fail line per criterion and exits
// nonzero if any of them fails.

#include <iostream>

#include "twistlab/suite.hpp"

int main() {
  const auto results = twistlab::acceptance::run_all();
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.index << ": " << r.name << " ("
              << r.detail << ") [" << r.seconds << "s]\n";
    all = all && r.passed;
  }
  std::cout << (all ? "acceptance: all criteria passed" : "acceptance: FAILURES present")
            << "\n";
  return all ? 0 : 1;
}
