#pragma once

// Low-degree mod-q cohomology of G^[3] through the central layer of S^[3]:
// H^2 is modelled as the dual of the relator image W, with cup products and
// Bocksteins read off as the w_kl and u_k columns of the relator rows.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gq3/freelie.hpp"
#include "gq3/qtrunc.hpp"

namespace gq3 {

struct CohomologyData {
  int q = 0;
  int n = 0;
  int h2_rank = 0;
  std::vector<std::vector<int>> bockstein;  // n rows of length h2_rank
  std::vector<std::vector<int>> cup;        // pair_count(n) rows, pairs (0,1),(0,2),..
  std::vector<std::int64_t> h2_divisors;    // divisor chain of the H^2 model, informational

  /// C(q,2) mod q: 0 for odd q, q/2 for even q.
  int kappa() const { return q % 2 == 0 ? q / 2 : 0; }
  /// x_k cup x_l for any k, l, using antisymmetry and cup(k,k) = kappa * bockstein(k).
  std::vector<int> cup_at(int k, int l) const;
  /// Throws ValidationError when table shapes are inconsistent.
  void validate() const;
  bool operator==(const CohomologyData& other) const = default;
};

/// h2_rank x (n + C(n,2)) matrix: columns bockstein(k), then cup(k,l).
ZqMatrix lambda_matrix(const CohomologyData& cd);

/// S^[3] / ann(Ker Lambda).
TruncGroup reconstruct_g3(const CohomologyData& cd);

struct CohomologyExtraction {
  RelatorAnalysis analysis;
  std::optional<CohomologyData> data;  // empty in the mixed-exponent case
  std::vector<int> row_relators;       // original relator index of each H^2 row
};

CohomologyExtraction extract_cohomology(const Presentation& pres);
/// Throws ValidationError outside the elementary G^[2] case.
CohomologyData cohomology_data_from_presentation(const Presentation& pres);

enum class ImageStatus { Independent, Dependent, Zero, Eliminated, Trivial };
std::string to_string(ImageStatus s);

struct RelatorReport {
  int relator = 0;  // original index
  ImageStatus status = ImageStatus::Independent;
  std::vector<int> image;
  /// Nontriviality in S: "hall:<weight>:<element>", "free-reduction" or empty.
  std::string certificate;
};

struct RelatorImageReport {
  int q = 0;
  int n = 0;
  int class_bound = kDefaultClassBound;
  std::vector<RelatorReport> relators;
  bool injective_on_relators = true;  // every kept relator independent
  bool failure_witnessed = false;     // a certified relator is zero or dependent
  std::vector<std::string> assumptions;
  std::vector<std::string> log;
};

RelatorImageReport check_relator_images(const Presentation& pres, int class_bound = kDefaultClassBound);

enum class TestStatus { Obstructed, Passed, Skipped };
std::string to_string(TestStatus s);

struct ScreenTest {
  std::string name;
  TestStatus status = TestStatus::Passed;
  std::string witness;
};

struct ScreenVerdict {
  bool obstructed = false;
  std::vector<ScreenTest> tests;
  std::vector<std::string> assumptions;
  int q = 0;
  int n = 0;
  int class_bound = kDefaultClassBound;
  std::string verdict() const { return obstructed ? "obstructed" : "no_obstruction_found"; }
};

struct ScreenOptions {
  std::optional<int> cd_bound;
  bool torsion_free = false;
  int class_bound = kDefaultClassBound;
};

/// Requires q prime (ValidationError otherwise).
ScreenVerdict obstruction_screen(const Presentation& pres, const ScreenOptions& opts = {});

struct MorphismReport {
  int n1 = 0;
  int n2 = 0;
  bool pi2_iso = false;     // on G^[2] = (Z/q)^n
  bool pi3_iso = false;     // condition (b)
  bool h1_iso = false;      // pi*_1
  bool dec2_injective = false;
  bool dec2_surjective = false;
  bool cond_b = false;
  bool cond_d = false;
  bool agree() const { return cond_b == cond_d; }
  std::string order1;
  std::string order2;
};

/// images[i] is a word in pres2's generators giving the image of pres1's
/// generator i. Throws ValidationError when a relator of pres1 is not sent
/// to the identity of G2^[3].
MorphismReport morphism_check(const Presentation& pres1, const Presentation& pres2, const std::vector<Word>& images);

/// Same with images given as elements of the reduced S2^[3].
MorphismReport morphism_check(const RelatorAnalysis& a1, const RelatorAnalysis& a2,
                              const std::vector<TruncElement>& reduced_images);

}  // namespace gq3
