// One line per criterion; nonzero exit if any fails.
#include <cstdio>

#include "hjdyn/acceptance.hpp"

int main() {
  int failed = 0;
  for (const hjdyn::CriterionResult& r : hjdyn::run_acceptance()) {
    std::printf("criterion %2d %s  %s: %s\n", r.id, r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    failed += !r.pass;
  }
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
