#include <gtest/gtest.h>

#include <algorithm>

#include "gq3/errors.hpp"
#include "gq3/exactlin.hpp"
#include "oracles.hpp"

using namespace gq3;
using oracle::Vec;

namespace {

std::set<Vec> elements_of(const ZqSubspace& w) {
  return oracle::span(w.q(), w.ambient_dim(), w.basis().row_vectors());
}

std::vector<Vec> random_rows(std::mt19937_64& rng, int q, int m, int count) {
  std::vector<Vec> rows(count, Vec(m));
  for (auto& r : rows)
    for (int& x : r) x = oracle::rand_int(rng, 0, q - 1);
  return rows;
}

const std::vector<int> kModuli{2, 3, 4, 5, 8, 9, 16, 25, 27, 32};

}  // namespace

TEST(Modulus, PrimePowersAccepted) {
  EXPECT_EQ(require_modulus(8).p, 2);
  EXPECT_EQ(require_modulus(8).d, 3);
  EXPECT_EQ(require_modulus(27).p, 3);
  EXPECT_EQ(require_modulus(31).d, 1);
  EXPECT_FALSE(prime_power(6).has_value());
  EXPECT_FALSE(prime_power(1).has_value());
  EXPECT_THROW(require_modulus(6), ValidationError);
  EXPECT_THROW(require_modulus(12), ValidationError);
  EXPECT_THROW(require_modulus(64), ValidationError);
  EXPECT_THROW(ZqMatrix(10, 1, 1), ValidationError);
}

TEST(Modulus, ValuationAndUnitInverse) {
  const PrimePower pp = require_modulus(8);
  EXPECT_EQ(valuation(4, pp), 2);
  EXPECT_EQ(valuation(6, pp), 1);
  EXPECT_EQ(valuation(0, pp), 3);
  for (int u : {1, 3, 5, 7}) EXPECT_EQ(u * inverse_unit(u, 8) % 8, 1);
  for (int u = 1; u < 9; ++u)
    if (u % 3) {
      EXPECT_EQ(u * inverse_unit(u, 9) % 9, 1);
    }
}

TEST(Smith, FrozenExamples) {
  SmithForm z = smith_normal_form(ZqMatrix(4, 1, 1, {0}));
  EXPECT_EQ(z.d, ZqMatrix(4, 1, 1, {0}));
  EXPECT_EQ(z.p, ZqMatrix::identity(4, 1));
  EXPECT_EQ(z.qm, ZqMatrix::identity(4, 1));

  SmithForm id = smith_normal_form(ZqMatrix::identity(9, 2));
  EXPECT_EQ(id.d, ZqMatrix::identity(9, 2));

  const ZqMatrix two(4, 1, 1, {2});
  SmithForm s = smith_normal_form(two);
  EXPECT_EQ(s.d, two);
  // every choice of 1x1 units multiplies back to the diagonal
  for (int u : {1, 3})
    for (int v : {1, 3}) {
      ZqMatrix pu(4, 1, 1, {u}), qv(4, 1, 1, {v});
      EXPECT_EQ((pu * two * qv)(0, 0), 2);
    }
  EXPECT_EQ(s.p * two * s.qm, s.d);
}

TEST(Smith, PropertyPMQisDiagonalDivisorChain) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 400; ++t) {
    const int q = kModuli[oracle::rand_int(rng, 0, static_cast<int>(kModuli.size()) - 1)];
    const int r = oracle::rand_int(rng, 1, 5), c = oracle::rand_int(rng, 1, 5);
    ZqMatrix m = ZqMatrix::from_rows(q, c, random_rows(rng, q, c, r));
    if (t % 3 == 0) m = ZqMatrix::from_rows(q, c, random_rows(rng, q, c, r)) * ZqMatrix(q, c, c);  // zero
    SmithForm s = smith_normal_form(m);
    ASSERT_EQ(s.p * m * s.qm, s.d) << m.to_string();
    // invertibility: the rows of P and of Q span everything
    EXPECT_EQ(canonicalize(s.p).log_cardinality(), r * s.p.d());
    EXPECT_EQ(canonicalize(s.qm).log_cardinality(), c * s.qm.d());
    int prev = 0;
    const PrimePower pp = m.modulus();
    for (int i = 0; i < std::min(r, c); ++i) {
      for (int j = 0; j < c; ++j)
        if (i != j) {
          EXPECT_EQ(s.d(i, j), 0);
        }
      const int v = valuation(s.d(i, i), pp);
      EXPECT_GE(v, prev);
      EXPECT_EQ(s.d(i, i), v == pp.d ? 0 : static_cast<int>(oracle::ipow(pp.p, v)));
      prev = v;
    }
  }
}

TEST(Canonicalize, FrozenExamples) {
  ZqSubspace a = span_of(4, 2, {{2, 0}, {0, 2}});
  EXPECT_EQ(a.basis_size(), 2);
  EXPECT_EQ(oracle::span(4, 2, {{2, 0}, {0, 2}}).size(), 4u);
  EXPECT_EQ(oracle::ipow(2, a.log_cardinality()), 4);

  EXPECT_TRUE(span_of(5, 3, {}).is_zero());

  ZqSubspace d = span_of(3, 2, {{1, 0}, {1, 0}});
  ASSERT_EQ(d.basis_size(), 1);
  EXPECT_EQ(d.basis().row_vectors()[0], (Vec{1, 0}));
}

TEST(Canonicalize, RejectsOversizedAmbient) {
  EXPECT_THROW(ZqSubspace::zero(2, kMaxAmbientDim + 1), DimensionError);
  EXPECT_THROW(canonicalize(ZqMatrix(2, 1, kMaxAmbientDim + 1)), DimensionError);
  EXPECT_NO_THROW(canonicalize(ZqMatrix(2, 1, kMaxAmbientDim)));
}

TEST(Canonicalize, PropertyHowellFormIsUniqueAndIdempotent) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 300; ++t) {
    const int q = std::vector<int>{2, 3, 4}[t % 3];
    const int m = oracle::rand_int(rng, 1, 4);
    std::vector<Vec> rows = random_rows(rng, q, m, oracle::rand_int(rng, 0, 4));
    ZqSubspace w = span_of(q, m, rows);
    const std::set<Vec> truth = oracle::span(q, m, rows);
    ASSERT_EQ(elements_of(w), truth);
    EXPECT_EQ(canonicalize(w.basis()), w);
    // any other generating set, here a random sample of the span plus the
    // original rows shuffled, gives the identical basis
    std::vector<Vec> other(truth.begin(), truth.end());
    std::shuffle(other.begin(), other.end(), rng);
    other.resize(std::min<std::size_t>(other.size(), 6));
    for (auto& r : rows) other.push_back(r);
    std::shuffle(other.begin(), other.end(), rng);
    EXPECT_EQ(span_of(q, m, other).basis(), w.basis());
    for (const Vec& v : oracle::all_vectors(q, m)) EXPECT_EQ(w.contains(v), truth.count(v) == 1);
  }
}

TEST(Canonicalize, PropertyReduceGivesCosetRepresentative) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 150; ++t) {
    const int q = std::vector<int>{4, 8, 9}[t % 3];
    const int m = oracle::rand_int(rng, 1, 3);
    std::vector<Vec> rows = random_rows(rng, q, m, oracle::rand_int(rng, 0, 3));
    ZqSubspace w = span_of(q, m, rows);
    std::set<Vec> reps;
    for (const Vec& v : oracle::all_vectors(q, m)) {
      Vec r = w.reduce(v);
      Vec diff(m);
      for (int i = 0; i < m; ++i) diff[i] = ((v[i] - r[i]) % q + q) % q;
      EXPECT_TRUE(w.contains(diff));
      reps.insert(r);
    }
    EXPECT_EQ(static_cast<std::int64_t>(reps.size()) * static_cast<std::int64_t>(elements_of(w).size()),
              oracle::ipow(q, m));
  }
}

TEST(Annihilator, FrozenExamples) {
  EXPECT_EQ(annihilator(ZqSubspace::zero(7, 3)), ZqSubspace::full(7, 3));
  EXPECT_TRUE(annihilator(ZqSubspace::full(4, 3)).is_zero());
  ZqSubspace a = annihilator(span_of(4, 2, {{2, 0}}));
  EXPECT_EQ(a, span_of(4, 2, {{2, 0}, {0, 1}}));
  EXPECT_EQ(elements_of(a), oracle::annihilator(4, 2, {{2, 0}}));
}

TEST(Annihilator, PropertyPerfectPairing) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 300; ++t) {
    const int q = std::vector<int>{2, 3, 4, 5, 8, 9}[t % 6];
    const int m = oracle::rand_int(rng, 1, q > 5 ? 3 : 4);
    std::vector<Vec> rows = random_rows(rng, q, m, oracle::rand_int(rng, 0, 3));
    ZqSubspace w = span_of(q, m, rows), a = annihilator(w);
    EXPECT_EQ(elements_of(a), oracle::annihilator(q, m, rows));
    EXPECT_EQ(oracle::ipow(require_modulus(q).p, w.log_cardinality() + a.log_cardinality()), oracle::ipow(q, m));
    EXPECT_EQ(annihilator(a), w);
  }
}

TEST(Kernel, FrozenExamples) {
  EXPECT_TRUE(kernel(ZqMatrix::identity(5, 3)).is_zero());
  const ZqMatrix m = ZqMatrix::from_rows(4, 2, {{2, 0}, {0, 0}});
  EXPECT_EQ(kernel(m), span_of(4, 2, {{2, 0}, {0, 1}}));
  EXPECT_TRUE(image(ZqMatrix(3, 2, 4)).is_zero());
}

TEST(Kernel, PropertyMatchesEnumeration) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 200; ++t) {
    const int q = std::vector<int>{2, 3, 4, 8, 9}[t % 5];
    const int r = oracle::rand_int(rng, 1, 4), c = oracle::rand_int(rng, 1, 3);
    std::vector<Vec> rows = random_rows(rng, q, c, r);
    ZqMatrix m = ZqMatrix::from_rows(q, c, rows);
    EXPECT_EQ(elements_of(kernel(m)), oracle::kernel(q, c, rows));
    std::set<Vec> img;
    for (const Vec& x : oracle::all_vectors(q, c)) img.insert(m.apply(x));
    EXPECT_EQ(elements_of(image(m)), img);
    // preimage of a random subspace
    ZqSubspace u = span_of(q, r, random_rows(rng, q, r, oracle::rand_int(rng, 0, 2)));
    std::set<Vec> pre;
    for (const Vec& x : oracle::all_vectors(q, c))
      if (u.contains(m.apply(x))) pre.insert(x);
    EXPECT_EQ(elements_of(preimage(m, u)), pre);
  }
}

TEST(SubspaceAlgebra, PropertySumAndIntersection) {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 200; ++t) {
    const int q = std::vector<int>{2, 4, 9, 5}[t % 4];
    const int m = oracle::rand_int(rng, 1, 3);
    ZqSubspace a = span_of(q, m, random_rows(rng, q, m, oracle::rand_int(rng, 0, 2)));
    ZqSubspace b = span_of(q, m, random_rows(rng, q, m, oracle::rand_int(rng, 0, 2)));
    std::set<Vec> ea = elements_of(a), eb = elements_of(b), inter;
    for (const Vec& v : ea)
      if (eb.count(v)) inter.insert(v);
    EXPECT_EQ(elements_of(subspace_intersect(a, b)), inter);
    std::vector<Vec> both = a.basis().row_vectors();
    for (auto& r : b.basis().row_vectors()) both.push_back(r);
    EXPECT_EQ(elements_of(subspace_sum(a, b)), oracle::span(q, m, both));
    EXPECT_TRUE(subspace_sum(a, b).contains(a));
    EXPECT_TRUE(a.contains(subspace_intersect(a, b)));
    EXPECT_EQ(subspace_equal(a, b), ea == eb);
  }
}

TEST(SubspaceAlgebra, QuotientDivisorsMatchCounting) {
  ZqSubspace w = span_of(8, 2, {{2, 0}, {0, 4}});
  // (Z/8)^2 / (2Z/8 + 4Z/8) = Z/2 x Z/4
  EXPECT_EQ(w.quotient_divisors(), (std::vector<std::int64_t>{4, 2}));
  EXPECT_EQ(w.module_exponents(), (std::vector<int>{2, 1}));
}
