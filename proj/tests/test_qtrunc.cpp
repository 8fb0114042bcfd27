#include <gtest/gtest.h>

#include <cstdlib>
#include <map>
#include <set>

#include "gq3/errors.hpp"
#include "gq3/qtrunc.hpp"
#include "oracles.hpp"

using namespace gq3;

namespace {

std::vector<int> key(const TruncElement& a) {
  std::vector<int> k = a.e;
  k.insert(k.end(), a.c.begin(), a.c.end());
  return k;
}

TruncGroup group(int q, std::vector<std::string> gens, std::vector<std::string> rels) {
  return group_of(relator_subspace(make_presentation(q, gens, rels)));
}

std::vector<std::string> xs(int n) { return oracle::gen_names(n); }

struct BruteInvariants {
  std::int64_t order = 0;
  std::int64_t exponent = 1;
  std::int64_t center = 0;
  std::int64_t abelian_order = 0;
  std::int64_t abelian_exponent = 1;
};

BruteInvariants brute(const TruncGroup& g) {
  BruteInvariants b;
  const std::vector<TruncElement> el = g.elements();
  b.order = static_cast<std::int64_t>(el.size());
  // derived subgroup: closure of the generator commutators (all central)
  std::vector<TruncElement> comms;
  for (int k = 0; k < g.n(); ++k)
    for (int l = k + 1; l < g.n(); ++l) comms.push_back(g.normalize(g.commutator(g.generator(k), g.generator(l))));
  std::set<std::vector<int>> derived{key(g.identity())};
  std::vector<TruncElement> todo{g.identity()};
  while (!todo.empty()) {
    TruncElement x = todo.back();
    todo.pop_back();
    for (const auto& c : comms) {
      TruncElement y = g.normalize(g.multiply(x, c));
      if (derived.insert(key(y)).second) todo.push_back(y);
    }
  }
  b.abelian_order = b.order / static_cast<std::int64_t>(derived.size());
  for (const TruncElement& x : el) {
    std::int64_t k = 1;
    TruncElement y = x;
    while (!(g.normalize(y) == g.identity())) {
      y = g.multiply(y, x);
      ++k;
    }
    b.exponent = std::max(b.exponent, k);
    k = 1;
    y = x;
    while (!derived.count(key(g.normalize(y)))) {
      y = g.multiply(y, x);
      ++k;
    }
    b.abelian_exponent = std::max(b.abelian_exponent, k);
    bool central = true;
    for (int j = 0; j < g.n() && central; ++j)
      central = g.normalize(g.multiply(x, g.generator(j))) == g.normalize(g.multiply(g.generator(j), x));
    b.center += central;
  }
  return b;
}

std::int64_t product(const std::vector<std::int64_t>& v) {
  std::int64_t p = 1;
  for (auto x : v) p *= x;
  return p;
}

}  // namespace

TEST(FreeTruncation, FrozenOrders) {
  TruncGroup s = TruncGroup::free_truncation(2, 2);
  EXPECT_EQ(s.order_string(), "32");
  EXPECT_EQ(s.order_log(), 5);
  const auto el = s.elements();
  ASSERT_EQ(el.size(), 32u);
  std::set<std::vector<int>> keys;
  for (const auto& x : el) keys.insert(key(x));
  for (const auto& a : el)
    for (const auto& b : el) EXPECT_TRUE(keys.count(key(s.multiply(a, b))));
  EXPECT_EQ(TruncGroup::free_truncation(1, 3).order_string(), "9");
  EXPECT_EQ(TruncGroup::free_truncation(1, 3).central_dim(), 1);
  EXPECT_EQ(TruncGroup::free_truncation(3, 2).order_string(), "512");
  EXPECT_EQ(TruncGroup::free_truncation(8, 32).order_log(), 5 * (16 + 28));
}

TEST(FreeTruncation, Bounds) {
  EXPECT_THROW(free_truncation(0, 2), ValidationError);
  EXPECT_THROW(TruncGroup::free_truncation(9, 2), ValidationError);
  EXPECT_THROW(TruncGroup::free_truncation(2, 6), ValidationError);
  EXPECT_EQ(TruncGroup::free_truncation(0, 2).order_string(), "1");
}

TEST(Multiply, FrozenExamples) {
  TruncGroup s = TruncGroup::free_truncation(2, 2);
  TruncElement x = s.multiply(s.generator(1), s.generator(0));
  EXPECT_EQ(x.e, (std::vector<int>{1, 1}));
  EXPECT_EQ(x.c, (std::vector<int>{1}));
  TruncGroup s3 = TruncGroup::free_truncation(2, 3);
  TruncElement y = s3.multiply(s3.generator(1), s3.generator(0));
  EXPECT_EQ(y.c, (std::vector<int>{2}));  // w_12^{-1}
  EXPECT_EQ(s.multiply(x, s.identity()), x);
  EXPECT_EQ(multiply(s, s.identity(), x), x);
  // (s1 s2)^3 = s1^3 s2^3 [s2,s1]^3 at q = 3
  TruncElement ab = s3.multiply(s3.generator(0), s3.generator(1));
  TruncElement lhs = s3.power(ab, 3);
  TruncElement rhs = s3.multiply(s3.multiply(s3.power(s3.generator(0), 3), s3.power(s3.generator(1), 3)),
                                 s3.power(s3.commutator(s3.generator(1), s3.generator(0)), 3));
  EXPECT_EQ(lhs, rhs);
}

TEST(Multiply, RejectsInvalidInput) {
  TruncGroup s = TruncGroup::free_truncation(2, 3);
  TruncElement bad = s.identity();
  bad.e[0] = 9;
  EXPECT_THROW(multiply(s, bad, s.identity()), ValidationError);
  TruncElement shape{{0}, {}};
  EXPECT_THROW(multiply(s, shape, s.identity()), ValidationError);
}

TEST(Evaluate, FrozenExamples) {
  TruncGroup s = TruncGroup::free_truncation(2, 3);
  const auto n = xs(2);
  EXPECT_EQ(s.evaluate(parse_word("[x1,[x1,x2]]", n)), s.identity());
  TruncElement u = evaluate_word(s, parse_word("x1^3", n));
  EXPECT_EQ(u.e, (std::vector<int>{3, 0}));
  EXPECT_EQ(u.c, (std::vector<int>{0}));
  EXPECT_EQ(s.central_coords(u), (std::vector<int>{1, 0, 0}));
  EXPECT_EQ(s.evaluate(parse_word("[x1,x2]^2 [x2,x1]", n)).c, (std::vector<int>{1}));
  EXPECT_EQ(s.evaluate(parse_word("x1^9", n)), s.identity());
}

TEST(Evaluate, PropertyMatchesLetterCollection) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 400; ++t) {
    const int n = oracle::rand_int(rng, 1, 4);
    const int q = std::vector<int>{2, 3, 4, 5, 7, 8, 9}[t % 7];
    TruncGroup s = TruncGroup::free_truncation(n, q);
    const auto names = xs(n);
    Word w = parse_word(oracle::random_word_text(rng, n), names);
    if (letter_length(w) > 100000) continue;
    oracle::Collected c = oracle::collect(reduced_syllables(w), n, q);
    TruncElement a = s.evaluate(w);
    EXPECT_EQ(a.e, c.e) << to_string(w, names);
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) EXPECT_EQ(a.c[pair_index(n, k, l)], c.c[oracle::pair_slot(n, k, l)]);
    // normal-form word evaluates back to the same element
    EXPECT_EQ(s.evaluate(s.to_word(a)), a);
  }
}

TEST(GroupLaws, PropertyInverseAndPower) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 500; ++t) {
    const int n = oracle::rand_int(rng, 1, 4), q = std::vector<int>{2, 3, 4, 9, 16}[t % 5];
    TruncGroup s = TruncGroup::free_truncation(n, q);
    TruncElement a = s.identity();
    for (int& x : a.e) x = oracle::rand_int(rng, 0, q * q - 1);
    for (int& x : a.c) x = oracle::rand_int(rng, 0, q - 1);
    EXPECT_EQ(s.multiply(a, s.inverse(a)), s.identity());
    EXPECT_EQ(s.multiply(s.inverse(a), a), s.identity());
    const int k = oracle::rand_int(rng, -7, 7);
    TruncElement slow = s.identity();
    for (int i = 0; i < std::abs(k); ++i) slow = s.multiply(slow, k > 0 ? a : s.inverse(a));
    EXPECT_EQ(s.power(a, k), slow);
    EXPECT_EQ(s.power(a, q * q), s.identity());
    // powers of q land in the central layer
    EXPECT_TRUE(s.is_central_layer(s.power(a, q)));
  }
}

TEST(RelatorSubspace, FrozenExamples) {
  RelatorAnalysis a = relator_subspace(make_presentation(2, xs(2), {"x1^2"}));
  EXPECT_EQ(a.w, span_of(2, 3, {{1, 0, 0}}));
  for (int q : {2, 3, 4, 5}) {
    RelatorAnalysis b = relator_subspace(make_presentation(q, xs(2), {"x1^" + std::to_string(q) + " [x1,x2]"}));
    EXPECT_EQ(b.w, span_of(q, 3, {{1, 0, 1}})) << q;
    EXPECT_TRUE(b.minimal_input());
  }
  RelatorAnalysis c = relator_subspace(make_presentation(3, xs(3), {"[[x1,x2],x3]"}));
  EXPECT_TRUE(c.w.is_zero());
  EXPECT_EQ(c.status[0], RelatorStatus::Kept);
}

TEST(RelatorSubspace, EliminationAndTrivialRelators) {
  RelatorAnalysis a = relator_subspace(make_presentation(3, {"a", "b", "c"}, {"a b^3", "[a,b] c^3", "b b^-1"}));
  EXPECT_FALSE(a.minimal_input());
  ASSERT_EQ(a.eliminations.size(), 1u);
  EXPECT_EQ(a.eliminations[0].generator, 0);
  EXPECT_EQ(a.surviving_names, (std::vector<std::string>{"b", "c"}));
  EXPECT_EQ(a.status[0], RelatorStatus::Eliminated);
  EXPECT_EQ(a.status[2], RelatorStatus::DroppedTrivial);
  // a = b^-3 makes [a,b] trivial, leaving u_c
  EXPECT_EQ(a.w, span_of(3, 3, {{0, 1, 0}}));
  // the origin map sends a to b^-3
  TruncGroup f = TruncGroup::free_truncation(2, 3);
  EXPECT_EQ(a.origin[0], f.power(f.generator(0), -3));
  EXPECT_EQ(group_invariants(group_of(a)).order, "81");
}

TEST(RelatorSubspace, EliminationMatchesDirectQuotient) {
  // x2 = x1^5 x3^10 eliminated: G is generated by x1, x3 with the remaining relator rewritten by hand
  RelatorAnalysis a = relator_subspace(make_presentation(5, xs(3), {"x1^5 x2^-1 x3^10", "[x1,x2]^2 x3^5"}));
  RelatorAnalysis b = relator_subspace(make_presentation(5, {"x1", "x3"}, {"[x1,x1^5 x3^10]^2 x3^5"}));
  EXPECT_EQ(a.surviving_names, (std::vector<std::string>{"x1", "x3"}));
  EXPECT_EQ(a.w, b.w);
}

TEST(RelatorSubspace, MixedExponentIsFlagged) {
  RelatorAnalysis a = relator_subspace(make_presentation(4, xs(2), {"x1^2 [x1,x2]"}));
  EXPECT_TRUE(a.mixed_exponent());
  EXPECT_THROW(group_of(a), ValidationError);
  EXPECT_FALSE(relator_subspace(make_presentation(4, xs(2), {"x1^4 [x1,x2]"})).mixed_exponent());
}

TEST(Quotient, FrozenOrders) {
  TruncGroup s = TruncGroup::free_truncation(2, 2);
  EXPECT_EQ(quotient(s, ZqSubspace::zero(2, 3)).order_string(), "32");
  EXPECT_EQ(s.quotient(ZqSubspace::full(2, 3)).order_string(), "4");
  TruncGroup g = s.quotient(span_of(2, 3, {{1, 0, 0}}));
  EXPECT_EQ(g.order_string(), "16");
  EXPECT_EQ(g.elements().size(), 16u);
  EXPECT_THROW(s.quotient(ZqSubspace::zero(2, 4)), DimensionError);
}

TEST(Invariants, FrozenExamples) {
  GroupInvariants s = group_invariants(TruncGroup::free_truncation(2, 2));
  EXPECT_EQ(s.order, "32");
  EXPECT_EQ(s.abelianization, (std::vector<std::int64_t>{4, 4}));
  EXPECT_EQ(s.exponent, 4);
  EXPECT_EQ(group_invariants(group(2, xs(2), {"x1^2"})).order, "16");
  EXPECT_EQ(group_invariants(group(2, xs(2), {"x1^2"})).abelianization, (std::vector<std::int64_t>{4, 2}));
  for (int q : {2, 3, 4}) {
    GroupInvariants c = group_invariants(TruncGroup::free_truncation(1, q));
    EXPECT_EQ(c.center_order_log, c.order_log);
    EXPECT_EQ(c.abelianization, (std::vector<std::int64_t>{q * q}));
  }
  // orders strictly between q and q^2
  EXPECT_EQ(group_invariants(group(4, xs(1), {"x1^8"})).exponent, 8);
  EXPECT_EQ(group_invariants(group(9, xs(2), {"x1^27", "x2^9"})).exponent, 27);
  GroupInvariants t = group_invariants(group(3, xs(2), {"x1^3 [x1,x2]"}));
  EXPECT_EQ(t.order, "81");
  EXPECT_EQ(t.exponent, 9);
}

TEST(Invariants, PropertyMatchBruteForce) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 60; ++t) {
    const int q = std::vector<int>{2, 3, 4}[t % 3];
    const int n = oracle::rand_int(rng, 1, q == 4 ? 2 : 3);
    TruncGroup s = TruncGroup::free_truncation(n, q);
    std::vector<std::vector<int>> rows(oracle::rand_int(rng, 0, 3), std::vector<int>(s.central_dim()));
    for (auto& r : rows)
      for (int& x : r) x = oracle::rand_int(rng, 0, q - 1);
    TruncGroup g = s.quotient(span_of(q, s.central_dim(), rows));
    GroupInvariants inv = group_invariants(g);
    BruteInvariants b = brute(g);
    EXPECT_EQ(std::to_string(b.order), inv.order);
    EXPECT_EQ(b.exponent, inv.exponent);
    EXPECT_EQ(oracle::ipow(g.p(), inv.center_order_log), b.center);
    EXPECT_EQ(product(inv.abelianization), b.abelian_order);
    EXPECT_EQ(inv.abelianization.empty() ? 1 : inv.abelianization.front(), b.abelian_exponent);
  }
}

TEST(BruteIsomorphic, FrozenExamples) {
  EXPECT_EQ(brute_isomorphic(group(3, xs(2), {"x1^3 [x1,x2]"}), group(3, xs(2), {"x1^3 [x1,x2]"})), true);
  for (int p : {2, 3, 5}) {
    const std::string r = "x1^" + std::to_string(p);
    EXPECT_EQ(brute_isomorphic(group(p, xs(2), {r}), group(p, xs(2), {r + " [x1,[x1,x2]]"})), true);
  }
  EXPECT_EQ(brute_isomorphic(group(2, xs(2), {"x1^2"}), group(2, xs(2), {"[x1,x2]"})), false);
}

TEST(BruteIsomorphic, FindsNontrivialIsomorphisms) {
  EXPECT_EQ(brute_isomorphic(group(2, xs(2), {"x1^2"}), group(2, xs(2), {"x2^2"})), true);
  EXPECT_EQ(brute_isomorphic(group(3, xs(2), {"x1^3 [x1,x2]"}), group(3, xs(2), {"x2^3 [x2,x1]"})), true);
  EXPECT_EQ(brute_isomorphic(group(3, xs(2), {"x1^3 [x1,x2]"}), group(3, xs(2), {"x2^3 [x1,x2]"})), true);
  // same order and abelianization, different layer: x1^3 w12 vs x1^3 x2^3
  auto a = group(3, xs(2), {"x1^3", "[x1,x2]"});
  auto b = group(3, xs(2), {"x1^3", "x2^3 [x1,x2]"});
  EXPECT_EQ(brute_isomorphic(a, b), group_invariants(a) == group_invariants(b) ? std::optional<bool>() : false);
}

TEST(BruteIsomorphic, BudgetIsRespected) {
  auto a = group(3, xs(3), {"x1^3"});
  auto b = group(3, xs(3), {"x2^3"});
  EXPECT_FALSE(brute_isomorphic(a, b, 10).has_value());
  EXPECT_EQ(brute_isomorphic(a, b, 100000000), true);
}

TEST(BruteIsomorphic, BudgetFromEnvironment) {
  ::setenv("GQ3_BUDGET", "1234", 1);
  EXPECT_EQ(default_budget(), 1234);
  ::unsetenv("GQ3_BUDGET");
  EXPECT_EQ(default_budget(), 1000000);
}

TEST(CentralMap, ColumnsAreImagesOfLayerBasis) {
  TruncGroup s = TruncGroup::free_truncation(2, 3);
  TruncGroup t = TruncGroup::free_truncation(2, 3);
  // swap generators: u1 <-> u2, w12 -> -w12
  std::vector<TruncElement> img{t.generator(1), t.generator(0)};
  ZqMatrix m = s.central_map(t, img);
  EXPECT_EQ(m, ZqMatrix::from_rows(3, 3, {{0, 1, 0}, {1, 0, 0}, {0, 0, 2}}));
  TruncElement x = s.evaluate(parse_word("x1^4 x2 [x1,x2]", xs(2)));
  EXPECT_EQ(s.apply_hom(t, img, x), t.evaluate(parse_word("x2^4 x1 [x2,x1]", xs(2))));
}
