#include "gq3/qtrunc.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "gq3/errors.hpp"

namespace gq3 {

int pair_count(int n) { return n * (n - 1) / 2; }

int pair_index(int n, int k, int l) {
  // rows (0,1..n-1), (1,2..n-1), ...
  return k * (2 * n - k - 1) / 2 + (l - k - 1);
}

namespace {

std::string decimal_power(int p, int k) {
  std::vector<int> digits{1};  // little-endian base 10
  for (int i = 0; i < k; ++i) {
    int carry = 0;
    for (int& dgt : digits) {
      int v = dgt * p + carry;
      dgt = v % 10;
      carry = v / 10;
    }
    while (carry) {
      digits.push_back(carry % 10);
      carry /= 10;
    }
  }
  std::string s;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) s += static_cast<char>('0' + *it);
  return s;
}

int mod_i64(std::int64_t x, int m) { return mod(x, m); }

}  // namespace

TruncGroup TruncGroup::free_truncation(int n, int q) {
  if (n < 0 || n > kMaxTruncGenerators)
    throw ValidationError("generator count out of range 0.." + std::to_string(kMaxTruncGenerators));
  TruncGroup g;
  g.n_ = n;
  g.pp_ = require_modulus(q);
  g.w_ = ZqSubspace::zero(q, g.central_dim());
  return g;
}

TruncGroup TruncGroup::quotient(const CentralSubspace& w) const {
  if (w.ambient_dim() != central_dim() || (w.ambient_dim() > 0 && w.q() != q()))
    throw DimensionError("central subspace has the wrong ambient dimension or modulus");
  TruncGroup g = *this;
  g.w_ = subspace_sum(w_, w);
  return g;
}

int TruncGroup::order_log() const { return (2 * n_ + pair_count(n_)) * pp_.d - w_.log_cardinality(); }

std::string TruncGroup::order_string() const { return decimal_power(pp_.p, order_log()); }

TruncElement TruncGroup::identity() const {
  return {std::vector<int>(n_, 0), std::vector<int>(pair_count(n_), 0)};
}

TruncElement TruncGroup::generator(int k) const {
  if (k < 0 || k >= n_) throw std::out_of_range("generator index");
  TruncElement a = identity();
  a.e[k] = 1;
  return a;
}

TruncElement TruncGroup::central(const std::vector<int>& v) const {
  if (static_cast<int>(v.size()) != central_dim()) throw DimensionError("central coordinate vector has wrong length");
  TruncElement a = identity();
  for (int k = 0; k < n_; ++k) a.e[k] = mod(v[k], pp_.q) * pp_.q;
  for (int i = 0; i < pair_count(n_); ++i) a.c[i] = mod(v[n_ + i], pp_.q);
  return normalize(std::move(a));
}

bool TruncGroup::is_central_layer(const TruncElement& a) const {
  return std::all_of(a.e.begin(), a.e.end(), [&](int x) { return x % pp_.q == 0; });
}

std::vector<int> TruncGroup::central_coords(const TruncElement& a) const {
  if (!is_central_layer(a)) throw std::logic_error("element is not in the central layer");
  std::vector<int> v(central_dim());
  for (int k = 0; k < n_; ++k) v[k] = a.e[k] / pp_.q;
  for (int i = 0; i < pair_count(n_); ++i) v[n_ + i] = a.c[i];
  return v;
}

bool TruncGroup::valid(const TruncElement& a) const {
  if (static_cast<int>(a.e.size()) != n_ || static_cast<int>(a.c.size()) != pair_count(n_)) return false;
  for (int x : a.e)
    if (x < 0 || x >= q2()) return false;
  for (int x : a.c)
    if (x < 0 || x >= q()) return false;
  return true;
}

TruncElement TruncGroup::normalize(TruncElement a) const {
  if (w_.is_zero()) return a;
  const int q = pp_.q;
  std::vector<int> v(central_dim());
  for (int k = 0; k < n_; ++k) v[k] = a.e[k] / q;
  for (int i = 0; i < pair_count(n_); ++i) v[n_ + i] = a.c[i];
  v = w_.reduce(v);
  for (int k = 0; k < n_; ++k) a.e[k] = a.e[k] % q + q * v[k];
  for (int i = 0; i < pair_count(n_); ++i) a.c[i] = v[n_ + i];
  return a;
}

TruncElement TruncGroup::multiply(const TruncElement& a, const TruncElement& b) const {
  const int q = pp_.q, qq = q2();
  TruncElement r;
  r.e.resize(n_);
  r.c.resize(pair_count(n_));
  for (int k = 0; k < n_; ++k) r.e[k] = (a.e[k] + b.e[k]) % qq;
  // moving s_k^{b_k} left past s_l^{a_l} (k < l) contributes w_kl^{-a_l b_k}
  for (int k = 0; k < n_; ++k) {
    for (int l = k + 1; l < n_; ++l) {
      const int i = pair_index(n_, k, l);
      r.c[i] = mod(static_cast<std::int64_t>(a.c[i]) + b.c[i] - static_cast<std::int64_t>(a.e[l]) * b.e[k], q);
    }
  }
  return normalize(std::move(r));
}

TruncElement TruncGroup::inverse(const TruncElement& a) const {
  const int q = pp_.q, qq = q2();
  TruncElement r;
  r.e.resize(n_);
  r.c.resize(pair_count(n_));
  for (int k = 0; k < n_; ++k) r.e[k] = mod(-a.e[k], qq);
  for (int k = 0; k < n_; ++k)
    for (int l = k + 1; l < n_; ++l) {
      const int i = pair_index(n_, k, l);
      r.c[i] = mod(-static_cast<std::int64_t>(a.c[i]) - static_cast<std::int64_t>(a.e[k]) * a.e[l], q);
    }
  return normalize(std::move(r));
}

TruncElement TruncGroup::power(const TruncElement& a, std::int64_t k) const {
  // the exponent of S^[3] divides q^2
  std::int64_t m = mod_i64(k, q2());
  TruncElement result = identity();
  TruncElement base = a;
  while (m > 0) {
    if (m & 1) result = multiply(result, base);
    m >>= 1;
    if (m) base = multiply(base, base);
  }
  return result;
}

TruncElement TruncGroup::commutator(const TruncElement& a, const TruncElement& b) const {
  return multiply(multiply(inverse(a), inverse(b)), multiply(a, b));
}

TruncElement TruncGroup::evaluate(const Word& w) const {
  switch (w.kind) {
    case Word::Kind::Generator:
      if (w.generator < 0 || w.generator >= n_) throw ValidationError("word uses an undeclared generator");
      return generator(w.generator);
    case Word::Kind::Inverse:
      return inverse(evaluate(w.children.at(0)));
    case Word::Kind::Power:
      return power(evaluate(w.children.at(0)), w.exponent);
    case Word::Kind::Product: {
      TruncElement acc = identity();
      for (const auto& f : w.children) acc = multiply(acc, evaluate(f));
      return acc;
    }
    case Word::Kind::Commutator:
      return commutator(evaluate(w.children.at(0)), evaluate(w.children.at(1)));
  }
  return identity();
}

Word TruncGroup::to_word(const TruncElement& a) const {
  std::vector<Word> f;
  for (int k = 0; k < n_; ++k) {
    if (a.e[k] == 0) continue;
    f.push_back(a.e[k] == 1 ? Word::gen(k) : Word::power(Word::gen(k), a.e[k]));
  }
  for (int k = 0; k < n_; ++k)
    for (int l = k + 1; l < n_; ++l) {
      const int x = a.c[pair_index(n_, k, l)];
      if (x == 0) continue;
      Word cm = Word::commutator(Word::gen(k), Word::gen(l));
      f.push_back(x == 1 ? cm : Word::power(cm, x));
    }
  if (f.size() == 1) return std::move(f.front());
  return Word::product(std::move(f));
}

std::string TruncGroup::to_string(const TruncElement& a, const std::vector<std::string>& names) const {
  std::ostringstream os;
  os << "e=(";
  for (int k = 0; k < n_; ++k) os << (k ? "," : "") << a.e[k];
  os << ") c=(";
  for (int i = 0; i < pair_count(n_); ++i) os << (i ? "," : "") << a.c[i];
  os << ")";
  if (!names.empty()) os << " " << gq3::to_string(to_word(a), names);
  return os.str();
}

TruncElement TruncGroup::apply_hom(const TruncGroup& target, const std::vector<TruncElement>& images,
                                   const TruncElement& a) const {
  if (static_cast<int>(images.size()) != n_) throw DimensionError("one image per generator required");
  if (target.q() != q()) throw DimensionError("homomorphism between truncations with different q");
  TruncElement r = target.identity();
  for (int k = 0; k < n_; ++k) r = target.multiply(r, target.power(images[k], a.e[k]));
  for (int k = 0; k < n_; ++k)
    for (int l = k + 1; l < n_; ++l) {
      const int x = a.c[pair_index(n_, k, l)];
      if (x) r = target.multiply(r, target.power(target.commutator(images[k], images[l]), x));
    }
  return r;
}

ZqMatrix TruncGroup::central_map(const TruncGroup& target, const std::vector<TruncElement>& images) const {
  if (static_cast<int>(images.size()) != n_) throw DimensionError("one image per generator required");
  ZqMatrix m(q(), target.central_dim(), central_dim());
  auto put = [&](int col, const TruncElement& x) {
    auto v = target.central_coords(x);
    for (int r = 0; r < target.central_dim(); ++r) m.set(r, col, v[r]);
  };
  for (int k = 0; k < n_; ++k) put(k, target.power(images[k], q()));
  for (int k = 0; k < n_; ++k)
    for (int l = k + 1; l < n_; ++l) put(n_ + pair_index(n_, k, l), target.commutator(images[k], images[l]));
  return m;
}

std::vector<TruncElement> TruncGroup::elements(std::int64_t limit) const {
  const int m = central_dim(), q = pp_.q;
  std::int64_t total = 1;
  for (int i = 0; i < n_ + m; ++i) {
    total *= q;
    if (total > limit * (1LL << 20)) throw ValidationError("group too large to enumerate");
  }
  std::vector<std::vector<int>> reps;
  std::vector<int> v(m, 0);
  for (;;) {
    if (w_.reduce(v) == v) reps.push_back(v);
    int i = 0;
    while (i < m && ++v[i] == q) v[i++] = 0;
    if (i == m) break;
  }
  if (static_cast<std::int64_t>(reps.size()) > limit) throw ValidationError("group too large to enumerate");
  std::vector<TruncElement> out;
  std::vector<int> a(n_, 0);
  for (;;) {
    for (const auto& r : reps) {
      TruncElement x = identity();
      for (int k = 0; k < n_; ++k) x.e[k] = a[k] + q * r[k];
      for (int i = 0; i < pair_count(n_); ++i) x.c[i] = r[n_ + i];
      out.push_back(std::move(x));
      if (static_cast<std::int64_t>(out.size()) > limit) throw ValidationError("group too large to enumerate");
    }
    int i = 0;
    while (i < n_ && ++a[i] == q) a[i++] = 0;
    if (i == n_) break;
  }
  return out;
}

TruncGroup free_truncation(int n, int q) {
  if (n < 1) throw ValidationError("generator count must be at least 1");
  return TruncGroup::free_truncation(n, q);
}

TruncGroup quotient(const TruncGroup& s3, const CentralSubspace& w) { return s3.quotient(w); }

TruncElement multiply(const TruncGroup& g, const TruncElement& a, const TruncElement& b) {
  if (!g.valid(a) || !g.valid(b)) throw ValidationError("malformed normal form");
  return g.multiply(a, b);
}

TruncElement evaluate_word(const TruncGroup& g, const Word& w) { return g.evaluate(w); }

// ---------------------------------------------------------------------------
// Presentations

RelatorAnalysis relator_subspace(const Presentation& pres) {
  RelatorAnalysis out;
  out.q = pres.q;
  out.n_original = pres.n();
  const int q = pres.q, p = pres.p;
  TruncGroup s = TruncGroup::free_truncation(pres.n(), q);

  for (int k = 0; k < pres.n(); ++k) {
    out.surviving.push_back(k);
    out.origin.push_back(s.generator(k));
  }
  const int nr = static_cast<int>(pres.relators.size());
  std::vector<TruncElement> imgs(nr);
  out.status.assign(nr, RelatorStatus::Kept);
  for (int i = 0; i < nr; ++i) {
    if (reduced_syllables(pres.relators[i]).empty()) {
      out.status[i] = RelatorStatus::DroppedTrivial;
      out.log.push_back("relator " + std::to_string(i + 1) + " is trivial in the free group; dropped");
      continue;
    }
    imgs[i] = s.evaluate(pres.relators[i]);
  }

  for (;;) {
    int ri = -1, j = -1;
    for (int i = 0; i < nr && ri < 0; ++i) {
      if (out.status[i] != RelatorStatus::Kept) continue;
      for (int k = 0; k < s.n(); ++k)
        if (imgs[i].e[k] % p != 0) {
          ri = i;
          j = k;
          break;
        }
    }
    if (ri < 0) break;

    const int n = s.n();
    TruncGroup t = TruncGroup::free_truncation(n - 1, q);
    const int ej = imgs[ri].e[j] % q;
    const int inv = inverse_unit(ej, q);
    std::vector<TruncElement> beta(n);
    TruncElement y0 = t.identity();
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const int kk = k < j ? k : k - 1;
      beta[k] = t.generator(kk);
      y0.e[kk] = mod(-static_cast<std::int64_t>(inv) * (imgs[ri].e[k] % q), q);
    }
    beta[j] = y0;
    std::vector<int> z0 = t.central_coords(s.apply_hom(t, beta, imgs[ri]));
    for (int& x : z0) x = mod(-static_cast<std::int64_t>(inv) * x, q);
    beta[j] = t.multiply(y0, t.central(z0));
    if (s.apply_hom(t, beta, imgs[ri]) != t.identity()) throw std::logic_error("generator elimination did not kill its relator");

    for (int i = 0; i < nr; ++i)
      if (out.status[i] == RelatorStatus::Kept && i != ri) imgs[i] = s.apply_hom(t, beta, imgs[i]);
    for (auto& o : out.origin) o = s.apply_hom(t, beta, o);
    out.status[ri] = RelatorStatus::Eliminated;
    out.eliminations.push_back({out.surviving[j], ri});
    out.log.push_back("relator " + std::to_string(ri + 1) + " has a unit exponent on " +
                      pres.generators[out.surviving[j]] + "; generator eliminated");
    out.surviving.erase(out.surviving.begin() + j);
    s = t;
  }

  for (int k : out.surviving) out.surviving_names.push_back(pres.generators[k]);
  out.images.assign(nr, {});
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < nr; ++i) {
    if (out.status[i] != RelatorStatus::Kept) continue;
    if (!s.is_central_layer(imgs[i])) {
      out.mixed_relators.push_back(i);
      out.log.push_back("relator " + std::to_string(i + 1) +
                        " has a non-unit exponent outside q Z; G^[2] is not elementary of exponent q");
      continue;
    }
    out.images[i] = s.central_coords(imgs[i]);
    rows.push_back(out.images[i]);
  }
  if (out.mixed_relators.empty()) out.w = span_of(q, s.central_dim(), rows);
  return out;
}

TruncGroup group_of(const RelatorAnalysis& a) {
  if (a.mixed_exponent())
    throw ValidationError("presentation has relators with non-unit exponents outside qZ (G^[2] not of the form (Z/q)^n)");
  return TruncGroup::free_truncation(a.n(), a.q).quotient(a.w);
}

// ---------------------------------------------------------------------------
// Invariants and isomorphism

GroupInvariants group_invariants(const TruncGroup& g) {
  GroupInvariants inv;
  const int n = g.n(), q = g.q(), m = g.central_dim();
  const PrimePower& pp = g.modulus();
  inv.order_log = g.order_log();
  inv.order = g.order_string();

  // abelianization: (Z/q^2)^n modulo q * (u-projection of W)
  std::vector<std::vector<int>> urows;
  for (const auto& row : g.w().basis().row_vectors()) urows.emplace_back(row.begin(), row.begin() + n);
  std::vector<int> s;
  if (!urows.empty() && n > 0) s = smith_exponents(ZqMatrix::from_rows(q, n, urows));
  for (int i = 0; i < n; ++i) {
    const int e = i < static_cast<int>(s.size()) ? s[i] : pp.d;
    std::int64_t order = q;
    for (int j = 0; j < e; ++j) order *= pp.p;
    inv.abelianization.push_back(order);
  }
  std::sort(inv.abelianization.rbegin(), inv.abelianization.rend());

  // center: exponent vectors a with [s^a, s_l] in W for every l
  ZqSubspace k = ZqSubspace::full(q, n);
  for (int l = 0; l < n; ++l) {
    ZqMatrix phi(q, m, n);
    for (int kk = 0; kk < n; ++kk) {
      if (kk < l) phi.set(n + pair_index(n, kk, l), kk, 1);
      if (kk > l) phi.set(n + pair_index(n, l, kk), kk, -1);
    }
    k = subspace_intersect(k, preimage(phi, g.w()));
  }
  inv.center_order_log = k.log_cardinality() + m * pp.d - g.w().log_cardinality();

  // x^q = sum e_k u_k + kappa sum e_k e_l w_kl, and the quadratic part has
  // order at most 2, so the exponent is q times the largest order of a u_k
  // mod W, except that for p = 2 the quadratic part alone may reach 2.
  if (n == 0) {
    inv.exponent = 1;
  } else {
    int top = 0;
    for (int kk = 0; kk < n; ++kk) {
      TruncElement y = g.power(g.generator(kk), q);
      int j = 0;
      for (; y != g.identity(); ++j) y = g.power(y, pp.p);
      top = std::max(top, j);
    }
    if (top == 0 && pp.p == 2) {
      for (int mask = 1; mask < (1 << n) && top == 0; ++mask) {
        TruncElement x = g.identity();
        for (int kk = 0; kk < n; ++kk) x.e[kk] = (mask >> kk) & 1;
        if (g.power(x, q) != g.identity()) top = 1;
      }
    }
    inv.exponent = q;
    for (int j = 0; j < top; ++j) inv.exponent *= pp.p;
  }
  return inv;
}

std::int64_t default_budget() {
  const char* env = std::getenv("GQ3_BUDGET");
  if (!env || !*env) return 1'000'000;
  char* end = nullptr;
  long long v = std::strtoll(env, &end, 10);
  if (*end != '\0' || v <= 0) throw ValidationError("GQ3_BUDGET must be a positive integer");
  return v;
}

namespace {

bool invertible_mod_p(std::vector<std::vector<int>> a, int p) {
  const int n = static_cast<int>(a.size());
  for (auto& row : a)
    for (int& x : row) x = mod(x, p);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return false;
    std::swap(a[col], a[piv]);
    const int inv = inverse_unit(a[col][col], p);
    for (int r = col + 1; r < n; ++r) {
      const int f = a[r][col] * inv % p;
      for (int c = col; c < n; ++c) a[r][c] = mod(a[r][c] - static_cast<std::int64_t>(f) * a[col][c], p);
    }
  }
  return true;
}

}  // namespace

std::optional<bool> brute_isomorphic(const TruncGroup& a, const TruncGroup& b, std::int64_t budget) {
  if (budget <= 0) throw ValidationError("budget must be positive");
  if (a.n() != b.n()) return false;  // minimal generator counts differ
  if (group_invariants(a) != group_invariants(b)) return false;
  if (a.q() != b.q()) return std::nullopt;
  if (a.w() == b.w()) return true;

  const int n = a.n(), q = a.q();
  std::int64_t count = 1;
  for (int i = 0; i < n * n; ++i) {
    count *= q;
    if (count > budget) return std::nullopt;
  }
  TruncGroup free = TruncGroup::free_truncation(n, q);
  std::vector<int> entries(n * n, 0);
  for (;;) {
    std::vector<std::vector<int>> mat(n, std::vector<int>(n));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) mat[r][c] = entries[r * n + c];
    if (invertible_mod_p(mat, a.p())) {
      std::vector<TruncElement> images(n, free.identity());
      for (int k = 0; k < n; ++k)
        for (int r = 0; r < n; ++r) images[k].e[r] = mat[r][k];
      ZqMatrix pi = free.central_map(free, images);
      if (b.w().contains(map_subspace(pi, a.w()))) return true;
    }
    int i = 0;
    while (i < n * n && ++entries[i] == q) entries[i++] = 0;
    if (i == n * n) break;
  }
  return false;
}

}  // namespace gq3
