#include "gq3/freelie.hpp"

#include <sstream>
#include <stdexcept>

#include "gq3/errors.hpp"

namespace gq3 {

namespace {

std::int64_t add_checked(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ValidationError("integer overflow in free Lie computation");
  return r;
}

std::int64_t mul_checked(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ValidationError("integer overflow in free Lie computation");
  return r;
}

void check_bounds(int n, int c) {
  if (n < 1 || n > kMaxLieGenerators) throw ValidationError("generator count out of range 1.." + std::to_string(kMaxLieGenerators));
  if (c < 1 || c > kMaxLieClass) throw ValidationError("class bound out of range 1.." + std::to_string(kMaxLieClass));
}

int mobius(int e) {
  int result = 1;
  for (int f = 2; f * f <= e; ++f) {
    if (e % f == 0) {
      e /= f;
      if (e % f == 0) return 0;
      result = -result;
    }
  }
  if (e > 1) result = -result;
  return result;
}

}  // namespace

std::int64_t witt_count(int n, int w) {
  std::int64_t total = 0;
  for (int e = 1; e <= w; ++e) {
    if (w % e != 0) continue;
    std::int64_t pw = 1;
    for (int i = 0; i < w / e; ++i) pw *= n;
    total += mobius(e) * pw;
  }
  return total / w;
}

HallBasis::HallBasis(int n, int c) : n_(n), c_(c) {
  check_bounds(n, c);
  for (int g = 0; g < n; ++g) elems_.push_back({1, g, -1, -1});
  for (int w = 2; w <= c; ++w) {
    const int existing = size();
    for (int u = 0; u < existing; ++u) {
      for (int v = 0; v < u; ++v) {
        if (elems_[u].weight + elems_[v].weight != w) continue;
        if (elems_[u].weight > 1 && elems_[u].right > v) continue;
        index_[{u, v}] = size();
        elems_.push_back({w, -1, u, v});
      }
    }
  }
}

std::vector<int> HallBasis::of_weight(int w) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (elems_[i].weight == w) out.push_back(i);
  return out;
}

int HallBasis::find(int u, int v) const {
  auto it = index_.find({u, v});
  return it == index_.end() ? -1 : it->second;
}

LieElement HallBasis::generator_element(int g) const {
  if (g < 0 || g >= n_) throw std::out_of_range("generator index");
  return LieElement{{g, 1}};
}

LieElement HallBasis::bracket_basis(int u, int v) const {
  if (u == v) return {};
  if (u < v) {
    LieElement r = bracket_basis(v, u);
    for (auto& [k, x] : r) x = -x;
    return r;
  }
  if (elems_[u].weight + elems_[v].weight > c_) return {};
  auto key = std::make_pair(u, v);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  LieElement result;
  if (elems_[u].weight == 1 || elems_[u].right <= v) {
    result[find(u, v)] = 1;
  } else {
    // [[a,b],v] = [a,[b,v]] + [[a,v],b]
    const int a = elems_[u].left, b = elems_[u].right;
    LieElement ea{{a, 1}}, eb{{b, 1}};
    result = lie_add(bracket(ea, bracket_basis(b, v)), bracket(bracket_basis(a, v), eb));
  }
  memo_[key] = result;
  return result;
}

LieElement HallBasis::bracket(const LieElement& a, const LieElement& b) const {
  LieElement out;
  for (const auto& [i, x] : a) {
    for (const auto& [j, y] : b) {
      if (elems_[i].weight + elems_[j].weight > c_) continue;
      const std::int64_t s = mul_checked(x, y);
      for (const auto& [k, z] : bracket_basis(i, j)) {
        std::int64_t& dst = out[k];
        dst = add_checked(dst, mul_checked(s, z));
        if (dst == 0) out.erase(k);
      }
    }
  }
  return out;
}

LieElement HallBasis::left_normed(const std::vector<int>& letters) const {
  if (letters.empty()) return {};
  LieElement acc = generator_element(letters[0]);
  for (std::size_t i = 1; i < letters.size(); ++i) acc = bracket(acc, generator_element(letters[i]));
  return acc;
}

std::string HallBasis::to_string(int index, const std::vector<std::string>& names) const {
  const HallElement& e = elems_.at(index);
  if (e.weight == 1) {
    if (e.generator < static_cast<int>(names.size())) return names[e.generator];
    return "x" + std::to_string(e.generator + 1);
  }
  return "[" + to_string(e.left, names) + "," + to_string(e.right, names) + "]";
}

std::string HallBasis::to_string(const LieElement& e, const std::vector<std::string>& names) const {
  if (e.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, x] : e) {
    if (!first) os << (x < 0 ? " - " : " + ");
    else if (x < 0) os << "-";
    first = false;
    std::int64_t ax = x < 0 ? -x : x;
    if (ax != 1) os << ax << "*";
    os << to_string(k, names);
  }
  return os.str();
}

std::vector<HallElement> hall_basis(int n, int c) { return HallBasis(n, c).elements(); }

LieElement lie_bracket(const HallBasis& basis, const LieElement& a, const LieElement& b) { return basis.bracket(a, b); }

LieElement lie_add(const LieElement& a, const LieElement& b, std::int64_t scale) {
  LieElement out = a;
  for (const auto& [k, x] : b) {
    std::int64_t& dst = out[k];
    dst = add_checked(dst, mul_checked(scale, x));
    if (dst == 0) out.erase(k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Magnus series

namespace {

std::uint64_t ipow_u(int n, int m) {
  std::uint64_t r = 1;
  for (int i = 0; i < m; ++i) r *= static_cast<std::uint64_t>(n);
  return r;
}

std::uint64_t degree_offset(int n, int m) {
  std::uint64_t off = 0;
  for (int i = 0; i < m; ++i) off += ipow_u(n, i);
  return off;
}

}  // namespace

std::uint64_t MagnusSeries::key(const std::vector<int>& letters) const {
  std::uint64_t idx = 0;
  for (int l : letters) idx = idx * n_ + static_cast<std::uint64_t>(l);
  return degree_offset(n_, static_cast<int>(letters.size())) + idx;
}

std::vector<int> MagnusSeries::letters(std::uint64_t k) const {
  int m = 0;
  while (degree_offset(n_, m + 1) <= k) ++m;
  std::uint64_t idx = k - degree_offset(n_, m);
  std::vector<int> out(m);
  for (int i = m - 1; i >= 0; --i) {
    out[i] = static_cast<int>(idx % n_);
    idx /= n_;
  }
  return out;
}

void MagnusSeries::add(std::uint64_t k, std::int64_t v) {
  if (v == 0) return;
  std::int64_t& dst = t_[k];
  dst = add_checked(dst, v);
  if (dst == 0) t_.erase(k);
}

MagnusSeries MagnusSeries::one(int n, int c) {
  MagnusSeries s(n, c);
  s.t_[0] = 1;
  return s;
}

MagnusSeries MagnusSeries::generator_power(int n, int c, int g, std::int64_t k) {
  // (1 + X)^k = sum_i binom(k, i) X^i, valid for negative k as well
  MagnusSeries s(n, c);
  __int128 b = 1;
  std::vector<int> word;
  for (int i = 0; i <= c; ++i) {
    if (i > 0) {
      b = b * (static_cast<__int128>(k) - (i - 1)) / i;
      word.push_back(g);
    }
    if (b > INT64_MAX || b < INT64_MIN) throw ValidationError("integer overflow in Magnus expansion");
    s.add(s.key(word), static_cast<std::int64_t>(b));
  }
  return s;
}

MagnusSeries MagnusSeries::operator*(const MagnusSeries& rhs) const {
  MagnusSeries out(n_, c_);
  // group terms of rhs by degree so the concatenated key can be formed directly
  std::vector<std::uint64_t> offs(c_ + 2);
  for (int m = 0; m <= c_ + 1; ++m) offs[m] = degree_offset(n_, m);
  auto degree_of = [&](std::uint64_t k) {
    int m = 0;
    while (offs[m + 1] <= k) ++m;
    return m;
  };
  for (const auto& [ka, va] : t_) {
    const int ma = degree_of(ka);
    const std::uint64_t ia = ka - offs[ma];
    for (const auto& [kb, vb] : rhs.t_) {
      const int mb = degree_of(kb);
      if (ma + mb > c_) break;  // keys are ordered by degree
      const std::uint64_t ib = kb - offs[mb];
      out.add(offs[ma + mb] + ia * ipow_u(n_, mb) + ib, mul_checked(va, vb));
    }
  }
  return out;
}

MagnusSeries MagnusSeries::inverse() const {
  // (1 + N)^-1 = sum_i (-N)^i
  MagnusSeries neg(n_, c_);
  for (const auto& [k, v] : t_)
    if (k != 0) neg.add(k, -v);
  MagnusSeries acc = one(n_, c_);
  MagnusSeries term = one(n_, c_);
  for (int i = 1; i <= c_; ++i) {
    term = term * neg;
    for (const auto& [k, v] : term.t_) acc.add(k, v);
  }
  return acc;
}

MagnusSeries MagnusSeries::pow(std::int64_t k) const {
  if (k < 0) {
    if (k == INT64_MIN) throw ValidationError("exponent overflow");
    return inverse().pow(-k);
  }
  MagnusSeries result = one(n_, c_);
  MagnusSeries base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

std::int64_t MagnusSeries::coeff(const std::vector<int>& letters) const {
  auto it = t_.find(key(letters));
  return it == t_.end() ? 0 : it->second;
}

int MagnusSeries::lowest_degree() const {
  for (const auto& [k, v] : t_)
    if (k != 0) return static_cast<int>(letters(k).size());
  return 0;
}

std::vector<std::pair<std::vector<int>, std::int64_t>> MagnusSeries::homogeneous(int m) const {
  std::vector<std::pair<std::vector<int>, std::int64_t>> out;
  const std::uint64_t lo = degree_offset(n_, m), hi = degree_offset(n_, m + 1);
  for (auto it = t_.lower_bound(lo); it != t_.end() && it->first < hi; ++it) out.emplace_back(letters(it->first), it->second);
  return out;
}

bool MagnusSeries::is_one() const { return t_.size() == 1 && t_.begin()->first == 0 && t_.begin()->second == 1; }

MagnusSeries magnus(const Word& w, int n, int c) {
  switch (w.kind) {
    case Word::Kind::Generator:
      if (w.generator < 0 || w.generator >= n) throw ValidationError("generator index out of range");
      return MagnusSeries::generator_power(n, c, w.generator, 1);
    case Word::Kind::Inverse:
      return magnus(w.children.at(0), n, c).inverse();
    case Word::Kind::Power: {
      const Word& base = w.children.at(0);
      if (base.kind == Word::Kind::Generator) {
        if (base.generator < 0 || base.generator >= n) throw ValidationError("generator index out of range");
        return MagnusSeries::generator_power(n, c, base.generator, w.exponent);
      }
      return magnus(base, n, c).pow(w.exponent);
    }
    case Word::Kind::Product: {
      MagnusSeries acc = MagnusSeries::one(n, c);
      for (const auto& f : w.children) acc = acc * magnus(f, n, c);
      return acc;
    }
    case Word::Kind::Commutator: {
      MagnusSeries a = magnus(w.children.at(0), n, c);
      MagnusSeries b = magnus(w.children.at(1), n, c);
      return a.inverse() * b.inverse() * a * b;
    }
  }
  return MagnusSeries::one(n, c);
}

namespace {

// Hall coordinates of a homogeneous Lie polynomial given by its associative
// expansion, using the Dynkin operator: theta(P) = m P for Lie P of degree m.
LieElement lie_coordinates(const HallBasis& basis, const std::vector<std::pair<std::vector<int>, std::int64_t>>& terms, int m) {
  LieElement acc;
  for (const auto& [letters, coef] : terms) acc = lie_add(acc, basis.left_normed(letters), coef);
  for (auto& [k, x] : acc) {
    if (x % m != 0) throw std::logic_error("leading term is not a Lie element");
    x /= m;
  }
  return acc;
}

Word basic_commutator_word(const HallBasis& basis, int h) {
  const HallElement& e = basis[h];
  if (e.weight == 1) return Word::gen(e.generator);
  return Word::commutator(basic_commutator_word(basis, e.left), basic_commutator_word(basis, e.right));
}

}  // namespace

std::optional<Certificate> word_nontriviality_certificate(const Word& w, const HallBasis& basis) {
  MagnusSeries s = magnus(w, basis.generators(), basis.class_bound());
  const int m = s.lowest_degree();
  if (m == 0) return std::nullopt;
  Certificate cert;
  cert.weight = m;
  cert.leading = lie_coordinates(basis, s.homogeneous(m), m);
  if (cert.leading.empty()) throw std::logic_error("nonzero Magnus component with zero Lie coordinates");
  return cert;
}

std::optional<Certificate> word_nontriviality_certificate(const Word& w, int n, int c) {
  HallBasis basis(n, c);
  return word_nontriviality_certificate(w, basis);
}

std::vector<std::int64_t> hall_exponents(const Word& w, const HallBasis& basis) {
  const int n = basis.generators(), c = basis.class_bound();
  std::vector<std::int64_t> exps(basis.size(), 0);
  MagnusSeries g = magnus(w, n, c);
  for (int m = 1; m <= c; ++m) {
    auto terms = g.homogeneous(m);
    if (terms.empty()) continue;
    LieElement lead = lie_coordinates(basis, terms, m);
    MagnusSeries peel = MagnusSeries::one(n, c);
    for (int h : basis.of_weight(m)) {
      auto it = lead.find(h);
      if (it == lead.end()) continue;
      exps[h] = it->second;
      peel = peel * magnus(basic_commutator_word(basis, h), n, c).pow(it->second);
    }
    g = peel.inverse() * g;
    if (!g.homogeneous(m).empty()) throw std::logic_error("collection failed to clear a weight");
  }
  return exps;
}

}  // namespace gq3
