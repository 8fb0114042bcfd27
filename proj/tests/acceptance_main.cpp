#include <cstdlib>
#include <iostream>

#include "gq3/acceptance.hpp"

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20240601;
  const auto results = gq3::run_acceptance(seed, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += !r.pass;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
