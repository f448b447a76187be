#include "selfref/acceptance.hpp"

#include <iostream>
#include <string>

// Usage: acceptance [criterion ids...]
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::stoi(argv[i]));
  auto results = selfref::run_acceptance(&std::cout, only);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass;
  std::cout << passed << "/" << results.size() << " criteria passed" << std::endl;
  return passed == results.size() ? 0 : 1;
}
