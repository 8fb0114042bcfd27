#pragma once

// The class-2 group S^[3] = S / S^(3) for a free pro-p group S of rank n,
// its central quotients G^[3], and the reduction of a presentation to a
// central subspace.
//
// Elements are written  s_1^{e_1} ... s_n^{e_n} prod_{k<l} w_kl^{c_kl}
// with e_k mod q^2, c_kl mod q and w_kl = [s_k, s_l].  The central layer has
// coordinates (t_1..t_n | c_12, c_13, ..., c_{n-1,n}) where s_k^{q t_k} = u_k^{t_k}.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gq3/exactlin.hpp"
#include "gq3/presparse.hpp"

namespace gq3 {

inline constexpr int kMaxTruncGenerators = 8;

int pair_count(int n);
/// Position of w_kl (0-based k < l) inside the commutator block.
int pair_index(int n, int k, int l);

struct TruncElement {
  std::vector<int> e;  // mod q^2
  std::vector<int> c;  // mod q
  bool operator==(const TruncElement& other) const = default;
};

using CentralSubspace = ZqSubspace;

struct GroupInvariants {
  int order_log = 0;                   // log_p |G|
  std::string order;                   // decimal
  std::vector<std::int64_t> abelianization;  // cyclic factor orders, decreasing
  int center_order_log = 0;
  std::int64_t exponent = 1;
  bool operator==(const GroupInvariants& other) const = default;
};

class TruncGroup {
 public:
  TruncGroup() = default;
  static TruncGroup free_truncation(int n, int q);
  /// S^[3] / W for a central subspace W of the free truncation's layer.
  TruncGroup quotient(const CentralSubspace& w) const;

  int n() const { return n_; }
  int q() const { return pp_.q; }
  int p() const { return pp_.p; }
  int d() const { return pp_.d; }
  int q2() const { return pp_.q * pp_.q; }
  /// n + C(n,2).
  int central_dim() const { return n_ + pair_count(n_); }
  const CentralSubspace& w() const { return w_; }
  const PrimePower& modulus() const { return pp_; }

  /// log_p of the group order.
  int order_log() const;
  std::string order_string() const;

  TruncElement identity() const;
  TruncElement generator(int k) const;
  /// The central element with layer coordinates v = (t | c).
  TruncElement central(const std::vector<int>& v) const;
  /// Layer coordinates of an element whose e-part is divisible by q.
  std::vector<int> central_coords(const TruncElement& a) const;
  bool is_central_layer(const TruncElement& a) const;

  /// Canonical coset representative modulo W.
  TruncElement normalize(TruncElement a) const;
  bool valid(const TruncElement& a) const;

  TruncElement multiply(const TruncElement& a, const TruncElement& b) const;
  TruncElement inverse(const TruncElement& a) const;
  TruncElement power(const TruncElement& a, std::int64_t k) const;
  /// [a,b] = a^-1 b^-1 a b.
  TruncElement commutator(const TruncElement& a, const TruncElement& b) const;

  TruncElement evaluate(const Word& w) const;

  /// Normal-form word s_1^{e_1} .. prod [x_k,x_l]^{c_kl}.
  Word to_word(const TruncElement& a) const;
  std::string to_string(const TruncElement& a, const std::vector<std::string>& names = {}) const;

  /// Image of an element under the homomorphism S^[3] -> target sending s_k
  /// to images[k]. The target must be a truncation on the same q.
  TruncElement apply_hom(const TruncGroup& target, const std::vector<TruncElement>& images,
                         const TruncElement& a) const;
  /// Matrix (target central_dim x central_dim) of the induced map on central
  /// layers: columns are the images of u_k and w_kl.
  ZqMatrix central_map(const TruncGroup& target, const std::vector<TruncElement>& images) const;

  /// Exhaustive list of elements; only for small groups.
  std::vector<TruncElement> elements(std::int64_t limit = 1 << 20) const;

 private:
  int n_ = 0;
  PrimePower pp_{};
  CentralSubspace w_;
};

TruncGroup free_truncation(int n, int q);
TruncGroup quotient(const TruncGroup& s3, const CentralSubspace& w);
TruncElement multiply(const TruncGroup& g, const TruncElement& a, const TruncElement& b);
TruncElement evaluate_word(const TruncGroup& g, const Word& w);

struct Elimination {
  int generator = 0;  // original generator index
  int relator = 0;    // original relator index
};

enum class RelatorStatus { Kept, Eliminated, DroppedTrivial };

struct RelatorAnalysis {
  int q = 0;
  int n_original = 0;
  std::vector<int> surviving;             // original indices of the remaining generators
  std::vector<std::string> surviving_names;
  std::vector<Elimination> eliminations;
  std::vector<RelatorStatus> status;      // per original relator
  /// Layer coordinates (over the surviving generators) of each kept relator;
  /// empty for relators that were eliminated or dropped.
  std::vector<std::vector<int>> images;
  /// Kept relators whose image is not central and has no unit exponent.
  std::vector<int> mixed_relators;
  /// Image in the reduced S^[3] of every original generator.
  std::vector<TruncElement> origin;
  std::vector<std::string> log;
  CentralSubspace w;  // valid only when mixed_relators is empty

  bool minimal_input() const { return eliminations.empty(); }
  bool mixed_exponent() const { return !mixed_relators.empty(); }
  int n() const { return static_cast<int>(surviving.size()); }
};

/// Evaluates relators in S^[3], eliminates generators against relators with
/// a unit exponent, and returns the span of the remaining central images.
RelatorAnalysis relator_subspace(const Presentation& pres);

/// G^[3] for an analysed presentation; throws ValidationError in the mixed case.
TruncGroup group_of(const RelatorAnalysis& a);

GroupInvariants group_invariants(const TruncGroup& g);

/// Brute-force budget from GQ3_BUDGET, default 10^6.
std::int64_t default_budget();

/// nullopt when the search would exceed the budget.
std::optional<bool> brute_isomorphic(const TruncGroup& a, const TruncGroup& b, std::int64_t budget = default_budget());

}  // namespace gq3
