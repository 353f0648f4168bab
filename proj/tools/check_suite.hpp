#pragma once

#include <string>
#include <vector>

namespace spherehit::cli {

struct CheckOutcome {
  std::string identity;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

// suite: all, bounds, gegenbauer, keystone, pde
std::vector<CheckOutcome> run_checks(const std::string& suite);

bool known_suite(const std::string& suite);

}  // namespace spherehit::cli
