#include "gq3/acceptance.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "gq3/cohomod.hpp"
#include "gq3/errors.hpp"
#include "gq3/freelie.hpp"
#include "gq3/kmilnor.hpp"
#include "gq3/qtrunc.hpp"

namespace gq3 {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string name(int k) { return "x" + std::to_string(k + 1); }

std::vector<std::string> names(int n) {
  std::vector<std::string> out;
  for (int k = 0; k < n; ++k) out.push_back(name(k));
  return out;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  int failures = 0;

  void fail(const std::string& what) {
    if (failures++ < 3) detail << (pass ? "" : "; ") << what;
    pass = false;
  }
};

// ---- 1: duality by brute enumeration

using Vec = std::vector<int>;

std::set<Vec> enumerate_span(int q, int m, const std::vector<Vec>& gens) {
  std::set<Vec> seen{Vec(m, 0)};
  std::vector<Vec> frontier{Vec(m, 0)};
  while (!frontier.empty()) {
    Vec v = frontier.back();
    frontier.pop_back();
    for (const Vec& g : gens) {
      Vec w(m);
      for (int i = 0; i < m; ++i) w[i] = (v[i] + g[i]) % q;
      if (seen.insert(w).second) frontier.push_back(w);
    }
  }
  return seen;
}

std::set<Vec> enumerate_annihilator(int q, int m, const std::vector<Vec>& gens) {
  std::set<Vec> out;
  Vec v(m, 0);
  for (;;) {
    bool ok = true;
    for (const Vec& g : gens) {
      std::int64_t s = 0;
      for (int i = 0; i < m; ++i) s += static_cast<std::int64_t>(v[i]) * g[i];
      if (s % q != 0) {
        ok = false;
        break;
      }
    }
    if (ok) out.insert(v);
    int i = 0;
    while (i < m && ++v[i] == q) v[i++] = 0;
    if (i == m) break;
  }
  return out;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

void duality_case(int q, int m, const std::vector<Vec>& gens, Outcome& out) {
  ZqSubspace w = span_of(q, m, gens);
  ZqSubspace a = annihilator(w);
  const int p = require_modulus(q).p;
  std::set<Vec> ws = enumerate_span(q, m, gens), as = enumerate_annihilator(q, m, gens);
  const auto card = [&](const ZqSubspace& s) { return ipow(p, s.log_cardinality()); };
  if (card(w) != static_cast<std::int64_t>(ws.size()) || card(a) != static_cast<std::int64_t>(as.size())) {
    out.fail("cardinality mismatch at q=" + std::to_string(q) + " m=" + std::to_string(m));
    return;
  }
  if (static_cast<std::int64_t>(ws.size() * as.size()) != ipow(q, m)) out.fail("|W||ann W| != q^m at q=" + std::to_string(q));
  for (const Vec& v : as)
    if (!a.contains(v)) {
      out.fail("annihilator misses a brute-force vector at q=" + std::to_string(q));
      break;
    }
  if (!(annihilator(a) == w)) out.fail("ann(ann W) != W at q=" + std::to_string(q));
}

Outcome criterion_duality(std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed ^ 0x101);
  int cases = 0;
  // exhaustive: every tuple of at most 3 rows of (Z/2)^m, m <= 3
  for (int m = 1; m <= 3; ++m) {
    const int vecs = 1 << m;
    for (int rows = 0; rows <= 3; ++rows) {
      const int total = ipow(vecs, rows);
      for (int code = 0; code < total; ++code) {
        std::vector<Vec> gens;
        int c = code;
        for (int r = 0; r < rows; ++r, c /= vecs) {
          Vec v(m);
          for (int i = 0; i < m; ++i) v[i] = (c % vecs >> i) & 1;
          gens.push_back(v);
        }
        duality_case(2, m, gens, out);
        ++cases;
      }
    }
  }
  const int exhaustive = cases;
  const std::vector<int> moduli{2, 3, 4, 5, 8, 9};
  for (int t = 0; t < 1200; ++t) {
    const int q = moduli[uniform(rng, 0, 5)], m = uniform(rng, 1, 4), rows = uniform(rng, 0, 3);
    std::vector<Vec> gens(rows, Vec(m));
    for (auto& v : gens)
      for (int& x : v) x = uniform(rng, 0, q - 1);
    duality_case(q, m, gens, out);
    ++cases;
  }
  out.detail << (out.pass ? "" : "; ") << cases << " subspaces (" << exhaustive << " exhaustive)";
  return out;
}

// ---- 2: collection laws

std::vector<int> key(const TruncElement& a) {
  std::vector<int> k = a.e;
  k.insert(k.end(), a.c.begin(), a.c.end());
  return k;
}

TruncElement random_element(const TruncGroup& g, std::mt19937_64& rng) {
  TruncElement a = g.identity();
  for (int& x : a.e) x = uniform(rng, 0, g.q2() - 1);
  for (int& x : a.c) x = uniform(rng, 0, g.q() - 1);
  return a;
}

bool binomial_law(const TruncGroup& g, const TruncElement& a, const TruncElement& b) {
  const int q = g.q();
  TruncElement lhs = g.power(g.multiply(a, b), q);
  TruncElement rhs = g.multiply(g.multiply(g.power(a, q), g.power(b, q)), g.power(g.commutator(b, a), q * (q - 1) / 2));
  return lhs == rhs;
}

Outcome criterion_collection(std::uint64_t seed) {
  Outcome out;
  std::int64_t checks = 0;
  for (int q : {2, 3, 4}) {
    const TruncGroup g = TruncGroup::free_truncation(2, q);
    const std::vector<TruncElement> el = g.elements();
    const int size = static_cast<int>(el.size());
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < size; ++i) index[key(el[i])] = i;
    std::vector<int> table(static_cast<std::size_t>(size) * size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) {
        auto it = index.find(key(g.multiply(el[i], el[j])));
        if (it == index.end()) {
          out.fail("product left the element list at q=" + std::to_string(q));
          return out;
        }
        table[static_cast<std::size_t>(i) * size + j] = it->second;
      }
    std::int64_t bad = 0;
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) {
        const int ij = table[static_cast<std::size_t>(i) * size + j];
        const int* row_ij = &table[static_cast<std::size_t>(ij) * size];
        const int* row_j = &table[static_cast<std::size_t>(j) * size];
        const int* row_i = &table[static_cast<std::size_t>(i) * size];
        for (int k = 0; k < size; ++k) bad += row_ij[k] != row_i[row_j[k]];
      }
    checks += static_cast<std::int64_t>(size) * size * size;
    if (bad) out.fail(std::to_string(bad) + " associativity failures at n=2 q=" + std::to_string(q));
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        if (!binomial_law(g, el[i], el[j])) {
          out.fail("binomial law fails at n=2 q=" + std::to_string(q));
          i = size;
          break;
        }
    checks += static_cast<std::int64_t>(size) * size;
  }
  std::mt19937_64 rng(seed ^ 0x202);
  const std::vector<int> moduli{2, 3, 4, 5, 7, 8, 9};
  for (int t = 0; t < 10000; ++t) {
    const int q = moduli[uniform(rng, 0, 6)], n = uniform(rng, 1, 4);
    const TruncGroup g = TruncGroup::free_truncation(n, q);
    TruncElement a = random_element(g, rng), b = random_element(g, rng), c = random_element(g, rng);
    if (!(g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c))))
      out.fail("random associativity failure at n=" + std::to_string(n) + " q=" + std::to_string(q));
    if (!binomial_law(g, a, b)) out.fail("random binomial failure at n=" + std::to_string(n) + " q=" + std::to_string(q));
    checks += 2;
  }
  out.detail << (out.pass ? "" : "; ") << checks << " identities checked";
  return out;
}

// ---- 3: extraction then reconstruction

Outcome criterion_round_trip(std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed ^ 0x303);
  int checked = 0;
  for (int t = 0; t < 500; ++t) {
    Presentation pres = random_minimal_presentation(rng, {2, 3, 4, 5});
    CohomologyExtraction ex = extract_cohomology(pres);
    if (!ex.analysis.minimal_input() || !ex.data) {
      out.fail("generated presentation was not minimal: " + to_string(pres));
      continue;
    }
    TruncGroup g = reconstruct_g3(*ex.data);
    if (!(g.w() == ex.analysis.w)) out.fail("round trip differs for " + to_string(pres));
    ++checked;
  }
  out.detail << (out.pass ? "" : "; ") << checked << " presentations";
  return out;
}

// ---- 4: equal truncations for x1^p and x1^p [x1,[x1,x2]]

Outcome criterion_equal_truncations(std::uint64_t) {
  Outcome out;
  for (int p : {2, 3, 5}) {
    const std::string tag = " at p=" + std::to_string(p);
    const std::string r1 = "x1^" + std::to_string(p);
    Presentation a = make_presentation(p, {"x1", "x2"}, {r1});
    Presentation b = make_presentation(p, {"x1", "x2"}, {r1 + " [x1,[x1,x2]]"});
    RelatorAnalysis ra = relator_subspace(a), rb = relator_subspace(b);
    if (!(ra.w == rb.w)) out.fail("central subspaces differ" + tag);
    std::optional<bool> iso = brute_isomorphic(group_of(ra), group_of(rb));
    if (iso != std::optional<bool>(true)) out.fail("G^[3] not identified" + tag);
    auto cert = word_nontriviality_certificate(parse_word("[x1,[x1,x2]]", a), 2, 3);
    if (!cert || cert->weight != 3) out.fail("no class-3 certificate" + tag);
    // the product of the two relators' difference is also certified
    auto diff = word_nontriviality_certificate(parse_word("x1^-" + std::to_string(p) + " " + r1 + " [x1,[x1,x2]]", a), 2, 3);
    if (!diff || diff->weight != 3) out.fail("r1^-1 r2 not certified" + tag);
  }
  out.detail << (out.pass ? "" : "; ") << "p in {2,3,5}";
  return out;
}

// ---- 5: screen verdicts

Outcome criterion_screen(std::uint64_t) {
  Outcome out;
  const auto expect = [&](int p, std::vector<std::string> gens, std::vector<std::string> rels, bool obstructed) {
    Presentation pres = make_presentation(p, gens, rels);
    ScreenVerdict v = obstruction_screen(pres);
    if (v.obstructed != obstructed)
      out.fail(to_string(pres) + " gave " + v.verdict());
  };
  for (int p : {2, 3, 5}) {
    expect(p, {"x1", "x2"}, {"[x1,[x1,x2]]"}, true);
    expect(p, {"x1", "x2", "x3"}, {"[[x1,x2],x3]"}, true);
    expect(p, {"x1", "x2"}, {}, false);
  }
  expect(2, {"x1", "x2"}, {"x1^2"}, false);
  out.detail << (out.pass ? "" : "; ") << "10 verdicts";
  return out;
}

// ---- 6: tame local fields against the matched one-relator group

Outcome criterion_tame(std::uint64_t) {
  Outcome out;
  for (auto [ell, q] : {std::pair{5, 2}, std::pair{13, 2}, std::pair{7, 3}}) {
    FieldPreset f = FieldPreset::parse("tame_local:" + std::to_string(ell));
    const std::string tag = " for l=" + std::to_string(ell) + " q=" + std::to_string(q);
    const auto t0 = std::chrono::steady_clock::now();
    GradedAlgebra k = milnor_mod_q(f, q, kMaxDegree);
    if (k.ranks() != std::vector<int>{2, 1, 0, 0}) out.fail("ranks differ" + tag);
    Presentation pres = matched_presentation(f, q);
    GaloisComparison g = galois_symbol_compare(f, q, pres, default_correspondence(f), kMaxDegree);
    if (!g.isomorphism) out.fail("no isomorphism against " + pres.relator_text.at(0) + tag);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s > 60) out.fail("instance over 60 s" + tag);
    out.detail << (ell == 5 ? "" : ", ") << "l=" << ell << ": " << pres.relator_text.at(0);
  }
  return out;
}

// ---- 7: finite fields

Outcome criterion_finite(std::uint64_t) {
  Outcome out;
  for (auto [ell, q] : {std::pair{5, 2}, std::pair{7, 2}, std::pair{7, 3}, std::pair{13, 3}}) {
    FieldPreset f = FieldPreset::parse("finite:" + std::to_string(ell));
    const std::string tag = " for l=" + std::to_string(ell) + " q=" + std::to_string(q);
    GradedAlgebra k = milnor_mod_q(f, q, 2);
    if (k.rank(1) != 1 || k.rank(2) != 0) out.fail("K_2/q nonzero" + tag);
    MilnorOptions wide;
    wide.window = 4;
    if (!(steinberg_relations(f, q) == steinberg_relations(f, q, wide))) out.fail("window doubling changed relations" + tag);
  }
  out.detail << (out.pass ? "" : "; ") << "4 fields";
  return out;
}

// ---- 8: two-adic

Outcome criterion_two_adic(std::uint64_t) {
  Outcome out;
  if (hilbert_symbol_2adic(-1, -1) != -1) out.fail("(-1,-1)_2 trivial");
  FieldPreset f = FieldPreset::parse("two_adic");
  MilnorOptions fine;
  fine.two_adic_precision = 10;
  if (!(steinberg_relations(f, 2) == steinberg_relations(f, 2, fine))) out.fail("relations change with precision");
  Presentation pres = matched_presentation(f, 2);
  CohomologyExtraction ex = extract_cohomology(pres);
  if (!ex.data) {
    out.fail("matched presentation is not minimal");
    return out;
  }
  const CohomologyData& cd = *ex.data;
  int checks = 0;
  for (int r = 0; r < cd.h2_rank; ++r) {
    // evaluate psi_k cup psi_k on the relator through the X_k X_k Magnus coefficient
    MagnusSeries m = magnus(pres.relators.at(ex.row_relators.at(r)), pres.n(), 2);
    for (int k = 0; k < cd.n; ++k) {
      const int oracle = static_cast<int>(((m.coeff({k, k}) % 2) + 2) % 2);
      if (cd.cup_at(k, k).at(r) != oracle || cd.bockstein[k][r] != oracle)
        out.fail("diagonal rule fails at " + name(k));
      ++checks;
    }
  }
  out.detail << (out.pass ? "" : "; ") << checks << " diagonal entries";
  return out;
}

// ---- 9: (b) and (d) agree on endomorphisms

bool brute_bijective(const TruncGroup& g, const std::vector<TruncElement>& images) {
  const std::vector<TruncElement> all = g.elements();
  std::set<std::vector<int>> seen;
  for (const TruncElement& x : all) seen.insert(key(g.normalize(g.apply_hom(g, images, x))));
  return seen.size() == all.size();
}

Outcome criterion_morphisms(std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed ^ 0x909);
  int agree = 0, isos = 0, brute = 0, filtered = 0;
  for (int t = 0; t < 200; ++t) {
    Presentation pres = random_minimal_presentation(rng, {2, 3, 4, 5});
    RelatorAnalysis a = relator_subspace(pres);
    const TruncGroup g = group_of(a);
    const TruncGroup s = TruncGroup::free_truncation(a.n(), a.q);
    const int n = a.n();
    const auto central = [&] {
      std::vector<int> v(s.central_dim());
      for (int& x : v) x = uniform(rng, 0, s.q() - 1);
      return s.central(v);
    };
    std::optional<MorphismReport> rep;
    std::vector<TruncElement> images(n);
    for (int attempt = 0; attempt < 200 && !rep; ++attempt) {
      const int kind = attempt >= 100 ? 0 : t % 4;
      for (int k = 0; k < n; ++k) {
        if (kind == 0) {
          images[k] = s.multiply(s.power(s.generator(k), 1 + s.q() * uniform(rng, 0, s.q() - 1)), central());
        } else if (kind == 1) {
          images[k] = central();
        } else {
          images[k] = random_element(s, rng);
          if (kind == 3 && uniform(rng, 0, 1)) images[k] = s.power(s.generator(uniform(rng, 0, n - 1)), uniform(rng, 1, 3));
        }
      }
      try {
        rep = morphism_check(a, a, images);
      } catch (const ValidationError&) {
        ++filtered;
      }
    }
    if (!rep) {
      out.fail("no valid endomorphism found for " + to_string(pres));
      continue;
    }
    if (rep->agree()) ++agree;
    else out.fail("(b) and (d) disagree for " + to_string(pres));
    isos += rep->cond_b;
    if (ipow(g.p(), g.order_log()) <= 4096 && ipow(g.q(), g.central_dim()) <= (1 << 20)) {
      ++brute;
      std::vector<TruncElement> reduced;
      for (const auto& x : images) reduced.push_back(g.normalize(x));
      if (brute_bijective(g, reduced) != rep->cond_b) out.fail("(b) contradicts enumeration for " + to_string(pres));
    }
  }
  out.detail << (out.pass ? "" : "; ") << agree << "/200 agree, " << isos << " isomorphisms, " << brute
             << " enumerated, " << filtered << " invalid candidates skipped";
  return out;
}

// ---- 10: Witt counts and the commutator block

Outcome criterion_witt(std::uint64_t) {
  Outcome out;
  for (int n = 1; n <= 4; ++n)
    for (int c = 1; c <= 5; ++c) {
      HallBasis b(n, c);
      for (int w = 1; w <= c; ++w)
        if (static_cast<std::int64_t>(b.of_weight(w).size()) != witt_count(n, w))
          out.fail("weight " + std::to_string(w) + " count differs at n=" + std::to_string(n));
    }
  for (int p : {2, 3, 5})
    for (int n = 1; n <= 4; ++n) {
      const TruncGroup s = TruncGroup::free_truncation(n, p);
      std::vector<std::vector<int>> rows;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          std::vector<int> v = s.central_coords(s.commutator(s.generator(k), s.generator(l)));
          rows.emplace_back(v.begin() + n, v.end());
        }
      const int block = pair_count(n);
      const int rank = block == 0 ? 0 : span_of(p, block, rows).log_cardinality();
      if (rank != witt_count(n, 2)) out.fail("commutator rank differs at n=" + std::to_string(n) + " p=" + std::to_string(p));
    }
  out.detail << (out.pass ? "" : "; ") << "n<=4, c<=5";
  return out;
}

struct Spec {
  const char* name;
  double limit;
  std::function<Outcome(std::uint64_t)> run;
};

const std::vector<Spec>& specs() {
  static const std::vector<Spec> s{
      {"duality perfectness", 10, criterion_duality},
      {"collection laws", 30, criterion_collection},
      {"cohomology round trip", 60, criterion_round_trip},
      {"equal truncations for x1^p and x1^p[x1,[x1,x2]]", 60, criterion_equal_truncations},
      {"obstruction screen verdicts", 60, criterion_screen},
      {"tame local fields", 180, criterion_tame},
      {"finite-field degeneration", 60, criterion_finite},
      {"two-adic field", 60, criterion_two_adic},
      {"morphism conditions agree", 60, criterion_morphisms},
      {"Witt counts", 60, criterion_witt},
  };
  return s;
}

}  // namespace

Presentation random_minimal_presentation(std::mt19937_64& rng, const std::vector<int>& moduli, int max_n,
                                         int max_relators) {
  const int q = moduli.at(uniform(rng, 0, static_cast<int>(moduli.size()) - 1));
  const int n = uniform(rng, 1, max_n);
  const auto g = [&] { return name(uniform(rng, 0, n - 1)); };
  const auto pair = [&] {
    int k = uniform(rng, 0, n - 1), l = uniform(rng, 0, n - 2);
    if (l >= k) ++l;
    return std::pair{name(k), name(l)};
  };
  std::vector<std::string> rels;
  const int count = uniform(rng, 0, max_relators);
  for (int r = 0; r < count; ++r) {
    std::string rel;
    const int factors = uniform(rng, 1, 3);
    for (int f = 0; f < factors; ++f) {
      const int kind = n == 1 ? 0 : uniform(rng, 0, 5);
      std::string piece;
      if (kind == 0) {
        piece = g() + "^" + std::to_string(q * uniform(rng, -2, 2));
      } else if (kind == 1) {
        auto [k, l] = pair();
        piece = "[" + k + "," + l + "]^" + std::to_string(uniform(rng, -q, q));
      } else if (kind == 2) {
        auto [k, l] = pair();
        piece = "(" + k + "^" + std::to_string(uniform(rng, 1, 3)) + " " + l + ")^" + std::to_string(q);
      } else if (kind == 3) {
        auto [k, l] = pair();
        piece = "[" + g() + ",[" + k + "," + l + "]]";
      } else if (kind == 4) {
        auto [k, l] = pair();
        const std::string m = g();
        piece = m + "^-1 [" + k + "," + l + "] " + m;
      } else {
        piece = "(" + g() + "^-1 " + g() + "^2)^" + std::to_string(q);
      }
      rel += (rel.empty() ? "" : " ") + piece;
    }
    rels.push_back(rel);
  }
  return make_presentation(q, names(n), rels);
}

CriterionResult run_criterion(int id, std::uint64_t seed) {
  const Spec& s = specs().at(id - 1);
  CriterionResult r;
  r.id = id;
  r.name = s.name;
  r.limit_seconds = s.limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome o = s.run(seed);
    r.pass = o.pass;
    r.detail = o.detail.str();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > r.limit_seconds) {
    r.pass = false;
    r.detail += " (time limit exceeded)";
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, std::ostream* out) {
  std::vector<CriterionResult> all;
  for (int id = 1; id <= static_cast<int>(specs().size()); ++id) {
    all.push_back(run_criterion(id, seed));
    if (out) *out << format_result(all.back()) << std::endl;
  }
  return all;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << "  " << r.name << "  [" << std::fixed;
  s.precision(2);
  s << r.seconds << "s of " << r.limit_seconds << "s]  " << r.detail;
  return s.str();
}

}  // namespace gq3
