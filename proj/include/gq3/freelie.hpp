#pragma once

// Free Lie ring on n generators truncated at class c, with a Hall basis, and
// leading-term certificates for words of the free group.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gq3/presparse.hpp"

namespace gq3 {

inline constexpr int kMaxLieGenerators = 8;
inline constexpr int kMaxLieClass = 6;
inline constexpr int kDefaultClassBound = 5;

struct HallElement {
  int weight = 1;
  int generator = -1;  // weight 1 only
  int left = -1;       // indices into the basis list, weight > 1 only
  int right = -1;
};

/// Hall index -> integer coefficient; zero coefficients are never stored.
using LieElement = std::map<int, std::int64_t>;

class HallBasis {
 public:
  HallBasis(int n, int c);

  int generators() const { return n_; }
  int class_bound() const { return c_; }
  int size() const { return static_cast<int>(elems_.size()); }
  const HallElement& operator[](int i) const { return elems_.at(i); }
  const std::vector<HallElement>& elements() const { return elems_; }

  /// Indices of basis elements of the given weight, in basis order.
  std::vector<int> of_weight(int w) const;
  /// Index of the bracket [u,v] when it is itself a basis element, else -1.
  int find(int u, int v) const;

  /// Bracket of two Lie elements rewritten into the basis; weight > c dropped.
  LieElement bracket(const LieElement& a, const LieElement& b) const;
  LieElement bracket_basis(int u, int v) const;

  LieElement generator_element(int g) const;
  /// Left-normed bracket [[..[x_{i1},x_{i2}],..],x_{im}].
  LieElement left_normed(const std::vector<int>& letters) const;

  std::string to_string(int index, const std::vector<std::string>& names = {}) const;
  std::string to_string(const LieElement& e, const std::vector<std::string>& names = {}) const;

 private:
  int n_;
  int c_;
  std::vector<HallElement> elems_;
  std::map<std::pair<int, int>, int> index_;
  mutable std::map<std::pair<int, int>, LieElement> memo_;
};

/// Witt's necklace count (1/w) sum_{e|w} mu(e) n^{w/e}.
std::int64_t witt_count(int n, int w);

std::vector<HallElement> hall_basis(int n, int c);

LieElement lie_bracket(const HallBasis& basis, const LieElement& a, const LieElement& b);

LieElement lie_add(const LieElement& a, const LieElement& b, std::int64_t scale = 1);

struct Certificate {
  int weight = 0;
  LieElement leading;  // Hall coordinates of the leading graded component
};

/// Lowest weight <= c at which w has a nonzero graded component, or nullopt
/// when w lies in the c+1-st lower central term.
std::optional<Certificate> word_nontriviality_certificate(const Word& w, int n, int c = kDefaultClassBound);
std::optional<Certificate> word_nontriviality_certificate(const Word& w, const HallBasis& basis);

/// Exponents of w in the collected form prod_h b_h^{e_h} (basis order) in the
/// free nilpotent group of class c.
std::vector<std::int64_t> hall_exponents(const Word& w, const HallBasis& basis);

// Magnus embedding into truncated noncommutative power series with integer
// coefficients: x_k -> 1 + X_k. Keys encode (degree, letter sequence).
class MagnusSeries {
 public:
  MagnusSeries(int n, int c) : n_(n), c_(c) {}
  static MagnusSeries one(int n, int c);
  static MagnusSeries generator_power(int n, int c, int g, std::int64_t k);

  MagnusSeries operator*(const MagnusSeries& rhs) const;
  MagnusSeries inverse() const;
  MagnusSeries pow(std::int64_t k) const;

  /// Coefficient of the monomial X_{i1}..X_{im}.
  std::int64_t coeff(const std::vector<int>& letters) const;
  /// Lowest degree m >= 1 with a nonzero coefficient, or 0.
  int lowest_degree() const;
  /// Nonzero terms of degree m.
  std::vector<std::pair<std::vector<int>, std::int64_t>> homogeneous(int m) const;
  bool is_one() const;

 private:
  std::uint64_t key(const std::vector<int>& letters) const;
  std::vector<int> letters(std::uint64_t key) const;
  void add(std::uint64_t key, std::int64_t v);

  int n_;
  int c_;
  std::map<std::uint64_t, std::int64_t> t_;
};

MagnusSeries magnus(const Word& w, int n, int c);

}  // namespace gq3
