#pragma once

// Exact linear algebra over Z/q for q = p^d. The ring is not a field when
// d > 1, so submodules are represented in Howell form, which is the unique
// canonical generating set of a submodule of (Z/q)^n.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gq3 {

inline constexpr int kMaxModulus = 32;
inline constexpr int kMaxAmbientDim = 256;

struct PrimePower {
  int q = 0;
  int p = 0;
  int d = 0;
};

/// Decomposes q as p^d, or nullopt when q is not a prime power (q >= 2).
std::optional<PrimePower> prime_power(std::int64_t q);

/// Throws ValidationError unless 2 <= q <= kMaxModulus and q is a prime power.
PrimePower require_modulus(std::int64_t q);

/// p-adic valuation of a residue mod q = p^d; returns d for zero.
int valuation(int x, const PrimePower& pp);

/// Inverse of a unit mod q.
int inverse_unit(int x, int q);

inline int mod(std::int64_t x, int q) {
  std::int64_t r = x % q;
  return static_cast<int>(r < 0 ? r + q : r);
}

class ZqMatrix {
 public:
  ZqMatrix() = default;
  ZqMatrix(int q, int rows, int cols);
  ZqMatrix(int q, int rows, int cols, std::vector<int> entries);

  static ZqMatrix identity(int q, int n);
  static ZqMatrix from_rows(int q, int cols, const std::vector<std::vector<int>>& rows);

  int q() const { return pp_.q; }
  int p() const { return pp_.p; }
  int d() const { return pp_.d; }
  const PrimePower& modulus() const { return pp_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  int operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  void set(int r, int c, std::int64_t v) { a_[static_cast<std::size_t>(r) * cols_ + c] = mod(v, pp_.q); }
  std::span<const int> row(int r) const {
    return {a_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
  }
  std::vector<std::vector<int>> row_vectors() const;

  ZqMatrix transpose() const;
  ZqMatrix operator*(const ZqMatrix& rhs) const;
  /// Column action: returns m * x.
  std::vector<int> apply(std::span<const int> x) const;
  bool is_zero() const;

  bool operator==(const ZqMatrix& other) const {
    return pp_.q == other.pp_.q && rows_ == other.rows_ && cols_ == other.cols_ && a_ == other.a_;
  }

  std::string to_string() const;

 private:
  PrimePower pp_{};
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> a_;
};

struct SmithForm {
  ZqMatrix d;   // diagonal, entries p^{s_0} | p^{s_1} | ... then zeros
  ZqMatrix p;   // invertible, rows x rows
  ZqMatrix qm;  // invertible, cols x cols;  p * m * qm == d
};

SmithForm smith_normal_form(const ZqMatrix& m);

/// Diagonal of the Smith form as p-exponents: s_i with d_i = p^{s_i}, and d
/// (the full exponent) for zero diagonal entries. Length min(rows, cols).
std::vector<int> smith_exponents(const ZqMatrix& m);

class ZqSubspace {
 public:
  ZqSubspace() = default;

  static ZqSubspace zero(int q, int ambient_dim);
  static ZqSubspace full(int q, int ambient_dim);

  int q() const { return basis_.q(); }
  int ambient_dim() const { return basis_.cols(); }
  const ZqMatrix& basis() const { return basis_; }
  int basis_size() const { return basis_.rows(); }
  bool is_zero() const { return basis_.rows() == 0; }

  /// log_p |W|.
  int log_cardinality() const;
  /// Pivot column of each basis row.
  const std::vector<int>& pivots() const { return pivots_; }

  /// Canonical representative of v + W.
  std::vector<int> reduce(std::span<const int> v) const;
  bool contains(std::span<const int> v) const;
  bool contains(const ZqSubspace& other) const;

  /// Elementary divisors of W as an abstract module: W ~ sum Z/p^{k_i}, k_i > 0,
  /// sorted decreasing.
  std::vector<int> module_exponents() const;
  /// Invariant factors of (Z/q)^n / W as orders p^{k}, sorted decreasing, trivial factors dropped.
  std::vector<std::int64_t> quotient_divisors() const;

  bool operator==(const ZqSubspace& other) const {
    return basis_ == other.basis_;
  }

 private:
  friend ZqSubspace canonicalize(const ZqMatrix& rows);
  ZqMatrix basis_;
  std::vector<int> pivots_;
};

/// Howell form of the row span. Idempotent; equal spans give identical results.
ZqSubspace canonicalize(const ZqMatrix& rows);
ZqSubspace span_of(int q, int ambient_dim, const std::vector<std::vector<int>>& rows);

/// { v : v . w = 0 for every w in W }.
ZqSubspace annihilator(const ZqSubspace& w);
/// { x : m x = 0 } inside (Z/q)^cols.
ZqSubspace kernel(const ZqMatrix& m);
/// { m x } inside (Z/q)^rows.
ZqSubspace image(const ZqMatrix& m);
/// { m x : x in W }.
ZqSubspace map_subspace(const ZqMatrix& m, const ZqSubspace& w);
/// { x : m x in U }.
ZqSubspace preimage(const ZqMatrix& m, const ZqSubspace& u);

bool subspace_equal(const ZqSubspace& a, const ZqSubspace& b);
ZqSubspace subspace_sum(const ZqSubspace& a, const ZqSubspace& b);
ZqSubspace subspace_intersect(const ZqSubspace& a, const ZqSubspace& b);

}  // namespace gq3
