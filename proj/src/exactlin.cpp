#include "gq3/exactlin.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "gq3/errors.hpp"

namespace gq3 {

std::optional<PrimePower> prime_power(std::int64_t q) {
  if (q < 2) return std::nullopt;
  std::int64_t p = 0;
  for (std::int64_t f = 2; f * f <= q; ++f) {
    if (q % f == 0) {
      p = f;
      break;
    }
  }
  if (p == 0) p = q;
  std::int64_t r = q;
  int d = 0;
  while (r % p == 0) {
    r /= p;
    ++d;
  }
  if (r != 1) return std::nullopt;
  if (q > INT32_MAX) return std::nullopt;
  return PrimePower{static_cast<int>(q), static_cast<int>(p), d};
}

PrimePower require_modulus(std::int64_t q) {
  auto pp = prime_power(q);
  if (!pp) throw ValidationError(std::to_string(q) + " is not a prime power");
  if (q > kMaxModulus) {
    throw ValidationError("modulus " + std::to_string(q) + " exceeds the supported maximum " +
                          std::to_string(kMaxModulus));
  }
  return *pp;
}

int valuation(int x, const PrimePower& pp) {
  if (x == 0) return pp.d;
  int v = 0;
  while (x % pp.p == 0) {
    x /= pp.p;
    ++v;
  }
  return v;
}

int inverse_unit(int x, int q) {
  // extended Euclid; q is small
  int a = mod(x, q), b = q;
  int s0 = 1, s1 = 0;
  while (b != 0) {
    int t = a / b;
    std::swap(a, b);
    b -= t * a;
    std::swap(s0, s1);
    s1 -= t * s0;
  }
  if (a != 1) throw std::logic_error("inverse_unit: not a unit");
  return mod(s0, q);
}

namespace {

int ipow(int base, int e) {
  int r = 1;
  while (e-- > 0) r *= base;
  return r;
}

using Rows = std::vector<std::vector<int>>;

// r -= f * s  (mod q)
void axpy(std::vector<int>& r, const std::vector<int>& s, int f, int q) {
  if (f % q == 0) return;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (s[i] != 0) r[i] = mod(r[i] - static_cast<std::int64_t>(f) * s[i], q);
  }
}

bool all_zero(const std::vector<int>& v) {
  return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

struct HowellResult {
  Rows rows;
  std::vector<int> pivots;
};

// Howell form of the row span of `a` (entries already reduced).
HowellResult howell(Rows a, int ncols, const PrimePower& pp) {
  const int q = pp.q;
  std::size_t k = 0;
  std::vector<int> pivots;
  for (int j = 0; j < ncols && k < a.size(); ++j) {
    std::size_t best = a.size();
    int bestv = pp.d;
    for (std::size_t i = k; i < a.size(); ++i) {
      int x = a[i][j];
      if (x == 0) continue;
      int v = valuation(x, pp);
      if (v < bestv) {
        bestv = v;
        best = i;
        if (v == 0) break;
      }
    }
    if (best == a.size()) continue;
    std::swap(a[k], a[best]);
    const int pivot = ipow(pp.p, bestv);
    const int unit = a[k][j] / pivot;
    if (unit != 1) {
      const int uinv = inverse_unit(unit, q);
      for (int& x : a[k]) x = mod(static_cast<std::int64_t>(x) * uinv, q);
    }
    for (std::size_t i = k + 1; i < a.size(); ++i) {
      if (a[i][j] != 0) axpy(a[i], a[k], a[i][j] / pivot, q);
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (a[i][j] >= pivot) axpy(a[i], a[k], a[i][j] / pivot, q);
    }
    if (bestv > 0) {
      std::vector<int> extra(a[k]);
      const int f = ipow(pp.p, pp.d - bestv);
      for (int& x : extra) x = mod(static_cast<std::int64_t>(x) * f, q);
      if (!all_zero(extra)) a.push_back(std::move(extra));
    }
    pivots.push_back(j);
    ++k;
  }
  a.resize(k);
  return {std::move(a), std::move(pivots)};
}

}  // namespace

// ---------------------------------------------------------------------------
// ZqMatrix

ZqMatrix::ZqMatrix(int q, int rows, int cols)
    : pp_(require_modulus(q)), rows_(rows), cols_(cols),
      a_(static_cast<std::size_t>(rows) * cols, 0) {
  if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
}

ZqMatrix::ZqMatrix(int q, int rows, int cols, std::vector<int> entries)
    : ZqMatrix(q, rows, cols) {
  if (entries.size() != a_.size()) throw DimensionError("entry count does not match shape");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] = mod(entries[i], q);
}

ZqMatrix ZqMatrix::identity(int q, int n) {
  ZqMatrix m(q, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

ZqMatrix ZqMatrix::from_rows(int q, int cols, const std::vector<std::vector<int>>& rows) {
  ZqMatrix m(q, static_cast<int>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != cols) throw DimensionError("row length mismatch");
    for (int c = 0; c < cols; ++c) m.set(static_cast<int>(r), c, rows[r][c]);
  }
  return m;
}

std::vector<std::vector<int>> ZqMatrix::row_vectors() const {
  std::vector<std::vector<int>> out;
  out.reserve(rows_);
  for (int r = 0; r < rows_; ++r) {
    auto s = row(r);
    out.emplace_back(s.begin(), s.end());
  }
  return out;
}

ZqMatrix ZqMatrix::transpose() const {
  ZqMatrix t(pp_.q, cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t.a_[static_cast<std::size_t>(c) * rows_ + r] = (*this)(r, c);
  return t;
}

ZqMatrix ZqMatrix::operator*(const ZqMatrix& rhs) const {
  if (cols_ != rhs.rows_ || pp_.q != rhs.pp_.q) throw DimensionError("matrix product shape mismatch");
  ZqMatrix out(pp_.q, rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const int a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < rhs.cols_; ++j) {
        auto& dst = out.a_[static_cast<std::size_t>(i) * rhs.cols_ + j];
        dst = mod(dst + static_cast<std::int64_t>(a) * rhs(k, j), pp_.q);
      }
    }
  }
  return out;
}

std::vector<int> ZqMatrix::apply(std::span<const int> x) const {
  if (static_cast<int>(x.size()) != cols_) throw DimensionError("vector length mismatch");
  std::vector<int> y(rows_, 0);
  for (int i = 0; i < rows_; ++i) {
    std::int64_t acc = 0;
    for (int j = 0; j < cols_; ++j) acc += static_cast<std::int64_t>((*this)(i, j)) * x[j];
    y[i] = mod(acc, pp_.q);
  }
  return y;
}

bool ZqMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](int x) { return x == 0; });
}

std::string ZqMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int r = 0; r < rows_; ++r) {
    os << (r ? "; " : "");
    for (int c = 0; c < cols_; ++c) os << (c ? " " : "") << (*this)(r, c);
  }
  os << "] mod " << pp_.q;
  return os.str();
}

// ---------------------------------------------------------------------------
// Smith normal form

SmithForm smith_normal_form(const ZqMatrix& m) {
  const PrimePower pp = m.modulus();
  const int q = pp.q;
  const int r = m.rows(), c = m.cols();
  Rows d(r, std::vector<int>(c));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) d[i][j] = m(i, j);
  Rows p(r, std::vector<int>(r, 0));
  for (int i = 0; i < r; ++i) p[i][i] = 1;
  // qm is kept transposed so that column operations become row operations
  Rows qt(c, std::vector<int>(c, 0));
  for (int i = 0; i < c; ++i) qt[i][i] = 1;

  auto col_axpy = [&](int dst, int src, int f) {
    if (f % q == 0) return;
    for (int i = 0; i < r; ++i) d[i][dst] = mod(d[i][dst] - static_cast<std::int64_t>(f) * d[i][src], q);
    axpy(qt[dst], qt[src], f, q);
  };

  for (int k = 0; k < std::min(r, c); ++k) {
    int bi = -1, bj = -1, bv = pp.d;
    for (int i = k; i < r && bv > 0; ++i)
      for (int j = k; j < c; ++j) {
        if (d[i][j] == 0) continue;
        int v = valuation(d[i][j], pp);
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    if (bi < 0) break;
    std::swap(d[k], d[bi]);
    std::swap(p[k], p[bi]);
    if (bj != k) {
      for (int i = 0; i < r; ++i) std::swap(d[i][k], d[i][bj]);
      std::swap(qt[k], qt[bj]);
    }
    const int pivot = ipow(pp.p, bv);
    const int unit = d[k][k] / pivot;
    if (unit != 1) {
      const int uinv = inverse_unit(unit, q);
      for (int& x : d[k]) x = mod(static_cast<std::int64_t>(x) * uinv, q);
      for (int& x : p[k]) x = mod(static_cast<std::int64_t>(x) * uinv, q);
    }
    for (int i = k + 1; i < r; ++i) {
      if (d[i][k] == 0) continue;
      const int f = d[i][k] / pivot;
      axpy(d[i], d[k], f, q);
      axpy(p[i], p[k], f, q);
    }
    for (int j = k + 1; j < c; ++j) {
      if (d[k][j] == 0) continue;
      col_axpy(j, k, d[k][j] / pivot);
    }
  }

  SmithForm out{ZqMatrix(q, r, c), ZqMatrix(q, r, r), ZqMatrix(q, c, c)};
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) out.d.set(i, j, d[i][j]);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) out.p.set(i, j, p[i][j]);
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) out.qm.set(j, i, qt[i][j]);
  return out;
}

std::vector<int> smith_exponents(const ZqMatrix& m) {
  SmithForm s = smith_normal_form(m);
  std::vector<int> out;
  for (int i = 0; i < std::min(m.rows(), m.cols()); ++i) out.push_back(valuation(s.d(i, i), m.modulus()));
  return out;
}

// ---------------------------------------------------------------------------
// ZqSubspace

ZqSubspace ZqSubspace::zero(int q, int ambient_dim) {
  if (ambient_dim < 0 || ambient_dim > kMaxAmbientDim) throw DimensionError("ambient dimension out of range");
  ZqSubspace s;
  s.basis_ = ZqMatrix(q, 0, ambient_dim);
  return s;
}

ZqSubspace ZqSubspace::full(int q, int ambient_dim) {
  return canonicalize(ZqMatrix::identity(q, ambient_dim));
}

int ZqSubspace::log_cardinality() const {
  int total = 0;
  for (int r = 0; r < basis_.rows(); ++r) {
    total += basis_.d() - valuation(basis_(r, pivots_[r]), basis_.modulus());
  }
  return total;
}

std::vector<int> ZqSubspace::reduce(std::span<const int> v) const {
  if (static_cast<int>(v.size()) != ambient_dim()) throw DimensionError("vector length mismatch");
  const int q = basis_.q();
  std::vector<int> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = mod(v[i], q);
  for (int r = 0; r < basis_.rows(); ++r) {
    const int j = pivots_[r];
    const int pivot = basis_(r, j);
    const int f = out[j] / pivot;
    if (f == 0) continue;
    auto row = basis_.row(r);
    for (std::size_t c = 0; c < out.size(); ++c) {
      if (row[c] != 0) out[c] = mod(out[c] - static_cast<std::int64_t>(f) * row[c], q);
    }
  }
  return out;
}

bool ZqSubspace::contains(std::span<const int> v) const {
  auto r = reduce(v);
  return all_zero(r);
}

bool ZqSubspace::contains(const ZqSubspace& other) const {
  for (int r = 0; r < other.basis_.rows(); ++r)
    if (!contains(other.basis_.row(r))) return false;
  return true;
}

std::vector<int> ZqSubspace::module_exponents() const {
  std::vector<int> out;
  if (basis_.rows() == 0) return out;
  for (int s : smith_exponents(basis_))
    if (s < basis_.d()) out.push_back(basis_.d() - s);
  std::sort(out.rbegin(), out.rend());
  return out;
}

std::vector<std::int64_t> ZqSubspace::quotient_divisors() const {
  const int n = ambient_dim();
  std::vector<int> s = basis_.rows() ? smith_exponents(basis_) : std::vector<int>{};
  std::vector<std::int64_t> out;
  for (int i = 0; i < n; ++i) {
    int e = i < static_cast<int>(s.size()) ? s[i] : basis_.d();
    if (e > 0) out.push_back(ipow(basis_.p(), e));
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

ZqSubspace canonicalize(const ZqMatrix& rows) {
  if (rows.cols() > kMaxAmbientDim) throw DimensionError("ambient dimension exceeds cap");
  Rows a = rows.row_vectors();
  HowellResult h = howell(std::move(a), rows.cols(), rows.modulus());
  ZqSubspace s;
  s.basis_ = ZqMatrix::from_rows(rows.q(), rows.cols(), h.rows);
  s.pivots_ = std::move(h.pivots);
  return s;
}

ZqSubspace span_of(int q, int ambient_dim, const std::vector<std::vector<int>>& rows) {
  return canonicalize(ZqMatrix::from_rows(q, ambient_dim, rows));
}

ZqSubspace kernel(const ZqMatrix& m) {
  const int r = m.rows(), c = m.cols();
  if (r == 0) return ZqSubspace::full(m.q(), c);
  // rows of [m^T | I_c]; Howell rows with vanishing left block span the kernel
  Rows aug(c, std::vector<int>(r + c, 0));
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < r; ++j) aug[i][j] = m(j, i);
    aug[i][r + i] = 1;
  }
  HowellResult h = howell(std::move(aug), r + c, m.modulus());
  std::vector<std::vector<int>> ker;
  for (std::size_t i = 0; i < h.rows.size(); ++i) {
    if (h.pivots[i] < r) continue;
    ker.emplace_back(h.rows[i].begin() + r, h.rows[i].end());
  }
  return span_of(m.q(), c, ker);
}

ZqSubspace annihilator(const ZqSubspace& w) { return kernel(w.basis()); }

ZqSubspace image(const ZqMatrix& m) { return canonicalize(m.transpose()); }

ZqSubspace map_subspace(const ZqMatrix& m, const ZqSubspace& w) {
  if (m.cols() != w.ambient_dim()) throw DimensionError("map_subspace: dimension mismatch");
  if (w.is_zero()) return ZqSubspace::zero(m.q(), m.rows());
  return canonicalize(w.basis() * m.transpose());
}

ZqSubspace preimage(const ZqMatrix& m, const ZqSubspace& u) {
  if (m.rows() != u.ambient_dim()) throw DimensionError("preimage: dimension mismatch");
  ZqSubspace ann = annihilator(u);
  if (ann.is_zero()) return ZqSubspace::full(m.q(), m.cols());
  return kernel(ann.basis() * m);
}

bool subspace_equal(const ZqSubspace& a, const ZqSubspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("subspace_equal: dimension mismatch");
  return a == b;
}

ZqSubspace subspace_sum(const ZqSubspace& a, const ZqSubspace& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.q() != b.q()) throw DimensionError("subspace_sum: dimension mismatch");
  auto rows = a.basis().row_vectors();
  auto more = b.basis().row_vectors();
  rows.insert(rows.end(), more.begin(), more.end());
  return span_of(a.q(), a.ambient_dim(), rows);
}

ZqSubspace subspace_intersect(const ZqSubspace& a, const ZqSubspace& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.q() != b.q())
    throw DimensionError("subspace_intersect: dimension mismatch");
  return annihilator(subspace_sum(annihilator(a), annihilator(b)));
}

}  // namespace gq3
