#pragma once

// Graded quotients of the tensor algebra over Z/q in bounded degree:
// quadratic hulls, quadraticity, and mod-q Milnor K-rings of a few fields.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gq3/cohomod.hpp"
#include "gq3/exactlin.hpp"
#include "gq3/presparse.hpp"

namespace gq3 {

inline constexpr int kMaxDegree = 4;

/// n^r, throwing ValidationError above the ambient cap.
int tensor_dim(int n, int r);

class GradedAlgebra {
 public:
  GradedAlgebra() = default;
  /// relations[r] is a subspace of V^{(x) r} for r = 0..r_max (relations[0]
  /// lives in dimension 1). Throws ValidationError when V (x) R_r + R_r (x) V
  /// is not contained in R_{r+1}.
  GradedAlgebra(int q, std::vector<std::string> names, std::vector<ZqSubspace> relations);

  int q() const { return q_; }
  int gen_count() const { return static_cast<int>(names_.size()); }
  int degree_bound() const { return static_cast<int>(relations_.size()) - 1; }
  const std::vector<std::string>& names() const { return names_; }
  const ZqSubspace& relations(int r) const { return relations_.at(r); }
  bool graded_commutative() const { return commutative_; }

  /// Invariant factors of A_r = V^{(x) r} / R_r (orders, decreasing).
  std::vector<std::int64_t> divisors(int r) const;
  /// Number of nontrivial cyclic factors of A_r.
  int rank(int r) const;
  /// rank(1), ..., rank(r_max).
  std::vector<int> ranks() const;

 private:
  int q_ = 0;
  std::vector<std::string> names_;
  std::vector<ZqSubspace> relations_;
  bool commutative_ = false;
};

/// Hull of the degree-2 datum Z: T_2 = Z and T_r spanned by Z placed on
/// every pair i < j of tensor positions with basis vectors elsewhere.
GradedAlgebra quadratic_hull(int q, const std::vector<std::string>& names, const ZqSubspace& zero_pairs, int r_max);

/// Per degree 0..r_max: does A_r agree with the hull built from A_1, A_2?
std::vector<bool> quadraticity_test(const GradedAlgebra& a);

struct FieldPreset {
  enum class Kind { FiniteField, TameLocal, TwoAdic };
  Kind kind = Kind::FiniteField;
  int ell = 0;  // residue characteristic; 2 for TwoAdic

  /// "finite:ELL", "tame_local:ELL" or "two_adic".
  static FieldPreset parse(const std::string& spec);
  std::string tag() const;
  /// Names of the chosen K_1 basis.
  std::vector<std::string> basis_names() const;
};

/// Throws ValidationError unless the preset supports modulus q.
void check_preset(const FieldPreset& f, int q);

struct MilnorOptions {
  int window = 2;               // t-valuation window for TameLocal
  int two_adic_precision = 8;   // search box [0, 2^k)^2 for the Hilbert symbol
};

/// Degree-2 relation span from the Steinberg / Hilbert-symbol oracle.
ZqSubspace steinberg_relations(const FieldPreset& f, int q, const MilnorOptions& opts = {});
GradedAlgebra milnor_mod_q(const FieldPreset& f, int q, int r_max, const MilnorOptions& opts = {});

/// (a,b)_2 for nonzero integers a, b, decided by searching for a primitive
/// (x,y) with a x^2 + b y^2 a nonzero 2-adic square. Returns +1 or -1.
int hilbert_symbol_2adic(std::int64_t a, std::int64_t b, int precision = 8);

/// Square-class representatives of Q_2 and their coordinates in the basis (-1, 2, 5).
std::vector<std::int64_t> two_adic_square_classes();
std::vector<int> two_adic_class(std::int64_t a);

/// Largest power of p dividing ell - 1.
std::int64_t root_of_unity_order(int ell, int p);

/// Presentation of the maximal pro-p Galois group matched to the preset.
Presentation matched_presentation(const FieldPreset& f, int q);
/// K_1 basis name -> generator name.
std::vector<std::pair<std::string, std::string>> default_correspondence(const FieldPreset& f);

/// Hull of the cup-product datum of a cohomology model.
GradedAlgebra cohomology_hull(const CohomologyData& cd, const std::vector<std::string>& names, int r_max);

struct DegreeComparison {
  int degree = 0;
  std::vector<std::int64_t> k_divisors;
  std::vector<std::int64_t> h_divisors;
  bool equal = false;
};

struct GaloisComparison {
  std::string field;
  int q = 0;
  int r_max = 0;
  std::vector<std::pair<std::string, std::string>> correspondence;
  std::vector<DegreeComparison> degrees;
  bool isomorphism = false;
  int first_failure = 0;  // degree, 0 when none
};

GaloisComparison galois_symbol_compare(const FieldPreset& f, int q, const Presentation& pres,
                                       const std::vector<std::pair<std::string, std::string>>& correspondence,
                                       int r_max, const MilnorOptions& opts = {});

}  // namespace gq3
