#pragma once

// The acceptance corpus: ten end-to-end checks with pinned time limits.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "gq3/presparse.hpp"

namespace gq3 {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  double limit_seconds = 0;
};

/// Random presentation with every relator inside S^(2): n in [1, max_n],
/// up to max_relators relators built from q-th powers, commutators, triple
/// commutators and conjugates. q is drawn from moduli.
Presentation random_minimal_presentation(std::mt19937_64& rng, const std::vector<int>& moduli, int max_n = 4,
                                         int max_relators = 3);

CriterionResult run_criterion(int id, std::uint64_t seed);

/// Runs criteria 1..10, printing one line per criterion to out when non-null.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed, std::ostream* out);

std::string format_result(const CriterionResult& r);

}  // namespace gq3
