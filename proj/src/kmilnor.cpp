#include "gq3/kmilnor.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gq3/errors.hpp"

namespace gq3 {

int tensor_dim(int n, int r) {
  std::int64_t d = 1;
  for (int i = 0; i < r; ++i) {
    d *= n;
    if (d > kMaxAmbientDim) throw ValidationError("tensor space exceeds " + std::to_string(kMaxAmbientDim) + " coordinates");
  }
  return static_cast<int>(d);
}

namespace {

// e_i (x) v  and  v (x) e_i  for v in V^{(x) r}
std::vector<int> left_mul(int n, int i, const std::vector<int>& v) {
  std::vector<int> out(v.size() * n, 0);
  std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(i * v.size()));
  return out;
}

std::vector<int> right_mul(int n, const std::vector<int>& v, int i) {
  std::vector<int> out(v.size() * n, 0);
  for (std::size_t k = 0; k < v.size(); ++k) out[k * n + i] = v[k];
  return out;
}

std::vector<int> tensor(const std::vector<int>& x, const std::vector<int>& y, int q) {
  std::vector<int> out(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) out[i * y.size() + j] = mod(static_cast<std::int64_t>(x[i]) * y[j], q);
  return out;
}

bool is_prime(int x) {
  if (x < 2) return false;
  for (int f = 2; f * f <= x; ++f)
    if (x % f == 0) return false;
  return true;
}

}  // namespace

GradedAlgebra::GradedAlgebra(int q, std::vector<std::string> names, std::vector<ZqSubspace> relations)
    : q_(q), names_(std::move(names)), relations_(std::move(relations)) {
  require_modulus(q);
  const int n = gen_count();
  if (n < 1) throw ValidationError("graded algebra needs at least one generator");
  if (relations_.size() < 2 || degree_bound() > kMaxDegree) throw ValidationError("degree bound out of range 1..4");
  for (int r = 0; r <= degree_bound(); ++r) {
    if (relations_[r].ambient_dim() != tensor_dim(n, r) || relations_[r].q() != q)
      throw DimensionError("relation subspace in degree " + std::to_string(r) + " has the wrong ambient space");
  }
  for (int r = 1; r < degree_bound(); ++r) {
    for (const auto& row : relations_[r].basis().row_vectors()) {
      for (int i = 0; i < n; ++i) {
        if (!relations_[r + 1].contains(left_mul(n, i, row)) || !relations_[r + 1].contains(right_mul(n, row, i)))
          throw ValidationError("multiplication is not well defined: degree " + std::to_string(r) +
                                " relations do not generate inside degree " + std::to_string(r + 1));
      }
    }
  }
  commutative_ = false;
  if (degree_bound() >= 2) {
    commutative_ = true;
    for (int i = 0; i < n && commutative_; ++i)
      for (int j = i; j < n && commutative_; ++j) {
        std::vector<int> v(n * n, 0);
        v[i * n + j] = mod(v[i * n + j] + 1, q);
        v[j * n + i] = mod(v[j * n + i] + 1, q);
        commutative_ = relations_[2].contains(v);
      }
  }
}

std::vector<std::int64_t> GradedAlgebra::divisors(int r) const { return relations_.at(r).quotient_divisors(); }

int GradedAlgebra::rank(int r) const { return static_cast<int>(divisors(r).size()); }

std::vector<int> GradedAlgebra::ranks() const {
  std::vector<int> out;
  for (int r = 1; r <= degree_bound(); ++r) out.push_back(rank(r));
  return out;
}

GradedAlgebra quadratic_hull(int q, const std::vector<std::string>& names, const ZqSubspace& zero_pairs, int r_max) {
  const int n = static_cast<int>(names.size());
  if (n < 1 || n > 4) throw ValidationError("degree-1 rank out of range 1..4");
  if (r_max < 1 || r_max > kMaxDegree) throw ValidationError("degree bound out of range 1..4");
  tensor_dim(n, r_max);
  if (zero_pairs.ambient_dim() != n * n || zero_pairs.q() != q) throw DimensionError("zero_pairs must live in V (x) V");

  std::vector<ZqSubspace> rel;
  rel.push_back(ZqSubspace::zero(q, 1));
  rel.push_back(ZqSubspace::zero(q, n));
  if (r_max >= 2) rel.push_back(zero_pairs);
  const auto z = zero_pairs.basis().row_vectors();
  for (int r = 3; r <= r_max; ++r) {
    // pairs inside the first or last r-1 positions come from T_{r-1}; the
    // remaining pairs straddle positions 1 and r
    std::vector<std::vector<int>> rows;
    for (const auto& b : rel[r - 1].basis().row_vectors())
      for (int i = 0; i < n; ++i) {
        rows.push_back(left_mul(n, i, b));
        rows.push_back(right_mul(n, b, i));
      }
    const int mid = tensor_dim(n, r - 2);
    const int dim = tensor_dim(n, r);
    for (const auto& zr : z) {
      for (int m = 0; m < mid; ++m) {
        std::vector<int> row(dim, 0);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) row[(a * mid + m) * n + b] = zr[a * n + b];
        rows.push_back(std::move(row));
      }
    }
    rel.push_back(span_of(q, dim, rows));
  }
  return GradedAlgebra(q, names, std::move(rel));
}

std::vector<bool> quadraticity_test(const GradedAlgebra& a) {
  std::vector<bool> out;
  if (a.degree_bound() < 2) return std::vector<bool>(a.degree_bound() + 1, true);
  GradedAlgebra hull = quadratic_hull(a.q(), a.names(), a.relations(2), a.degree_bound());
  for (int r = 0; r <= a.degree_bound(); ++r) out.push_back(hull.relations(r) == a.relations(r));
  return out;
}

// ---------------------------------------------------------------------------
// Field presets

FieldPreset FieldPreset::parse(const std::string& spec) {
  FieldPreset f;
  if (spec == "two_adic") {
    f.kind = Kind::TwoAdic;
    f.ell = 2;
    return f;
  }
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw ValidationError("unknown field preset '" + spec + "'");
  const std::string kind = spec.substr(0, colon), num = spec.substr(colon + 1);
  if (kind == "finite" || kind == "finite_field")
    f.kind = Kind::FiniteField;
  else if (kind == "tame_local")
    f.kind = Kind::TameLocal;
  else
    throw ValidationError("unknown field preset '" + spec + "'");
  if (num.empty() || num.size() > 6 || !std::all_of(num.begin(), num.end(), ::isdigit))
    throw ValidationError("preset needs a prime, got '" + num + "'");
  f.ell = std::stoi(num);
  if (!is_prime(f.ell) || f.ell > 10000) throw ValidationError("preset prime must be a prime <= 10000");
  return f;
}

std::string FieldPreset::tag() const {
  switch (kind) {
    case Kind::FiniteField: return "finite_field(" + std::to_string(ell) + ")";
    case Kind::TameLocal: return "tame_local(" + std::to_string(ell) + ")";
    case Kind::TwoAdic: return "two_adic";
  }
  return "?";
}

std::vector<std::string> FieldPreset::basis_names() const {
  switch (kind) {
    case Kind::FiniteField: return {"u"};
    case Kind::TameLocal: return {"u", "t"};
    case Kind::TwoAdic: return {"-1", "2", "5"};
  }
  return {};
}

void check_preset(const FieldPreset& f, int q) {
  require_modulus(q);
  if (f.kind == FieldPreset::Kind::TwoAdic) {
    if (q != 2) throw ValidationError("two_adic preset supports q = 2 only");
    return;
  }
  if (!is_prime(f.ell) || f.ell > 10000) throw ValidationError("preset prime must be a prime <= 10000");
  if ((f.ell - 1) % q != 0)
    throw ValidationError("q = " + std::to_string(q) + " does not divide " + std::to_string(f.ell) + " - 1");
}

std::int64_t root_of_unity_order(int ell, int p) {
  std::int64_t m = ell - 1, r = 1;
  while (m % p == 0) {
    m /= p;
    r *= p;
  }
  return r;
}

namespace {

struct DiscreteLog {
  int ell;
  std::vector<int> log;  // log[a] for a in 1..ell-1

  explicit DiscreteLog(int l) : ell(l), log(l, -1) {
    int g = 2;
    for (;; ++g) {
      int x = 1, order = 0;
      do {
        x = static_cast<int>(static_cast<std::int64_t>(x) * g % ell);
        ++order;
      } while (x != 1);
      if (order == ell - 1) break;
    }
    int x = 1;
    for (int k = 0; k < ell - 1; ++k) {
      log[x] = k;
      x = static_cast<int>(static_cast<std::int64_t>(x) * g % ell);
    }
  }
  int operator()(std::int64_t a) const { return log[mod(a, ell)]; }
};

// Laurent polynomial in t over F_ell: exponent -> coefficient
using Laurent = std::map<int, int>;

Laurent one_minus(const Laurent& a, int ell) {
  Laurent out;
  out[0] = 1;
  for (const auto& [e, c] : a) out[e] = mod(static_cast<std::int64_t>(out[e]) - c, ell);
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

// class in F^x / F^xq with basis (u, t): leading coefficient and valuation;
// the principal-unit tail is q-divisible since q is prime to ell
std::vector<int> tame_class(const Laurent& a, const DiscreteLog& dlog, int q) {
  const auto& [v, c] = *a.begin();
  return {mod(dlog(c), q), mod(v, q)};
}

std::vector<std::vector<int>> commutativity_rows(int n, int q) {
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<int> v(n * n, 0);
      v[i * n + j] = mod(v[i * n + j] + 1, q);
      v[j * n + i] = mod(v[j * n + i] + 1, q);
      rows.push_back(v);
    }
  return rows;
}

int v2(std::int64_t x) {
  int v = 0;
  while (x % 2 == 0) {
    x /= 2;
    ++v;
  }
  return v;
}

bool is_2adic_square(std::int64_t x) {
  if (x == 0) return false;
  const int v = v2(x);
  if (v % 2) return false;
  std::int64_t u = x / (std::int64_t{1} << v);
  return mod(u, 8) == 1;
}

}  // namespace

int hilbert_symbol_2adic(std::int64_t a, std::int64_t b, int precision) {
  if (a == 0 || b == 0) throw ValidationError("Hilbert symbol of zero");
  if (precision < 3 || precision > 16) throw ValidationError("precision out of range 3..16");
  const std::int64_t box = std::int64_t{1} << precision;
  for (std::int64_t x = 0; x < box; ++x)
    for (std::int64_t y = 0; y < box; ++y) {
      if (x % 2 == 0 && y % 2 == 0) continue;
      if (is_2adic_square(a * x * x + b * y * y)) return 1;
    }
  return -1;
}

std::vector<std::int64_t> two_adic_square_classes() { return {1, 3, 5, 7, 2, 6, 10, 14}; }

std::vector<int> two_adic_class(std::int64_t a) {
  if (a == 0) throw ValidationError("zero has no square class");
  const int v = v2(a);
  const int u = mod(a / (std::int64_t{1} << v), 8);
  // u = (-1)^s 5^f mod 8
  int s = 0, f = 0;
  switch (u) {
    case 1: break;
    case 3: s = 1; f = 1; break;
    case 5: f = 1; break;
    case 7: s = 1; break;
  }
  return {s, v % 2, f};
}

ZqSubspace steinberg_relations(const FieldPreset& f, int q, const MilnorOptions& opts) {
  check_preset(f, q);
  switch (f.kind) {
    case FieldPreset::Kind::FiniteField: {
      DiscreteLog dlog(f.ell);
      std::vector<std::vector<int>> rows = commutativity_rows(1, q);
      for (int a = 2; a < f.ell; ++a)
        rows.push_back({mod(static_cast<std::int64_t>(dlog(a)) * dlog(1 - a), q)});
      return span_of(q, 1, rows);
    }
    case FieldPreset::Kind::TameLocal: {
      if (opts.window < 1) throw ValidationError("valuation window must be positive");
      DiscreteLog dlog(f.ell);
      std::vector<std::vector<int>> rows = commutativity_rows(2, q);
      auto add = [&](const Laurent& a) {
        Laurent b = one_minus(a, f.ell);
        if (b.empty()) return;
        rows.push_back(tensor(tame_class(a, dlog, q), tame_class(b, dlog, q), q));
      };
      for (int v = -opts.window; v <= opts.window; ++v)
        for (int c = 1; c < f.ell; ++c) add(Laurent{{v, c}});
      for (int k = -opts.window; k <= opts.window; ++k) {
        if (k == 0) continue;
        for (int b = 1; b < f.ell; ++b) add(Laurent{{0, 1}, {k, b}});
      }
      return span_of(q, 4, rows);
    }
    case FieldPreset::Kind::TwoAdic: {
      std::vector<std::vector<int>> rows = commutativity_rows(3, q);
      const auto reps = two_adic_square_classes();
      for (auto a : reps)
        for (auto b : reps)
          if (hilbert_symbol_2adic(a, b, opts.two_adic_precision) == 1)
            rows.push_back(tensor(two_adic_class(a), two_adic_class(b), q));
      return span_of(q, 9, rows);
    }
  }
  throw ValidationError("unknown preset");
}

GradedAlgebra milnor_mod_q(const FieldPreset& f, int q, int r_max, const MilnorOptions& opts) {
  return quadratic_hull(q, f.basis_names(), steinberg_relations(f, q, opts), r_max);
}

Presentation matched_presentation(const FieldPreset& f, int q) {
  check_preset(f, q);
  switch (f.kind) {
    case FieldPreset::Kind::FiniteField:
      return make_presentation(q, {"x1"}, {});
    case FieldPreset::Kind::TameLocal: {
      const std::int64_t qf = root_of_unity_order(f.ell, require_modulus(q).p);
      return make_presentation(q, {"x1", "x2"}, {"x1^" + std::to_string(qf) + " [x1,x2]"});
    }
    case FieldPreset::Kind::TwoAdic:
      return make_presentation(2, {"x1", "x2", "x3"}, {"x1^2 x2^4 [x2,x3]"});
  }
  throw ValidationError("unknown preset");
}

std::vector<std::pair<std::string, std::string>> default_correspondence(const FieldPreset& f) {
  switch (f.kind) {
    case FieldPreset::Kind::FiniteField: return {{"u", "x1"}};
    case FieldPreset::Kind::TameLocal: return {{"u", "x2"}, {"t", "x1"}};
    case FieldPreset::Kind::TwoAdic: return {{"-1", "x1"}, {"2", "x2"}, {"5", "x3"}};
  }
  return {};
}

GradedAlgebra cohomology_hull(const CohomologyData& cd, const std::vector<std::string>& names, int r_max) {
  cd.validate();
  const int n = cd.n;
  if (static_cast<int>(names.size()) != n) throw DimensionError("one name per generator required");
  ZqSubspace z = ZqSubspace::full(cd.q, n * n);
  if (cd.h2_rank > 0) {
    ZqMatrix cup(cd.q, cd.h2_rank, n * n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        auto v = cd.cup_at(k, l);
        for (int r = 0; r < cd.h2_rank; ++r) cup.set(r, k * n + l, v[r]);
      }
    z = kernel(cup);
  }
  return quadratic_hull(cd.q, names, z, r_max);
}

GaloisComparison galois_symbol_compare(const FieldPreset& f, int q, const Presentation& pres,
                                       const std::vector<std::pair<std::string, std::string>>& correspondence,
                                       int r_max, const MilnorOptions& opts) {
  check_preset(f, q);
  if (pres.q != q) throw ValidationError("presentation modulus differs from q");
  GaloisComparison rep;
  rep.field = f.tag();
  rep.q = q;
  rep.r_max = r_max;
  rep.correspondence = correspondence;

  const GradedAlgebra k = milnor_mod_q(f, q, r_max, opts);
  CohomologyExtraction ex = extract_cohomology(pres);
  if (!ex.data) throw ValidationError("presentation is outside the elementary G^[2] hypothesis");
  const auto& hnames = ex.analysis.surviving_names;
  const GradedAlgebra h = cohomology_hull(*ex.data, hnames, r_max);

  const int n = k.gen_count();
  if (static_cast<int>(hnames.size()) != n || static_cast<int>(correspondence.size()) != n)
    throw ValidationError("correspondence must be a bijection between degree-1 bases");
  std::vector<int> perm(n, -1);
  std::set<int> used;
  for (const auto& [kn, hn] : correspondence) {
    auto ki = std::find(k.names().begin(), k.names().end(), kn);
    auto hi = std::find(hnames.begin(), hnames.end(), hn);
    if (ki == k.names().end() || hi == hnames.end())
      throw ValidationError("correspondence names unknown basis element '" + kn + "' or '" + hn + "'");
    const int a = static_cast<int>(ki - k.names().begin()), b = static_cast<int>(hi - hnames.begin());
    if (perm[a] >= 0 || !used.insert(b).second) throw ValidationError("correspondence is not a bijection");
    perm[a] = b;
  }

  rep.isomorphism = true;
  for (int r = 1; r <= r_max; ++r) {
    const int dim = tensor_dim(n, r);
    std::vector<std::vector<int>> rows;
    for (const auto& row : k.relations(r).basis().row_vectors()) {
      std::vector<int> out(dim, 0);
      for (int idx = 0; idx < dim; ++idx) {
        int rest = idx, mapped = 0, scale = 1;
        for (int pos = 0; pos < r; ++pos) {
          mapped += perm[rest % n] * scale;
          rest /= n;
          scale *= n;
        }
        out[mapped] = row[idx];
      }
      rows.push_back(std::move(out));
    }
    DegreeComparison dc;
    dc.degree = r;
    dc.k_divisors = k.divisors(r);
    dc.h_divisors = h.divisors(r);
    dc.equal = span_of(q, dim, rows) == h.relations(r);
    if (!dc.equal && rep.isomorphism) {
      rep.isomorphism = false;
      rep.first_failure = r;
    }
    rep.degrees.push_back(std::move(dc));
  }
  return rep;
}

}  // namespace gq3
