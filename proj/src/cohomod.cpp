#include "gq3/cohomod.hpp"

#include <algorithm>

#include "gq3/errors.hpp"

namespace gq3 {

std::vector<int> CohomologyData::cup_at(int k, int l) const {
  if (k < 0 || l < 0 || k >= n || l >= n) throw std::out_of_range("cup index");
  std::vector<int> v(h2_rank, 0);
  if (k == l) {
    for (int r = 0; r < h2_rank; ++r) v[r] = mod(static_cast<std::int64_t>(kappa()) * bockstein[k][r], q);
  } else if (k < l) {
    v = cup[pair_index(n, k, l)];
  } else {
    const auto& src = cup[pair_index(n, l, k)];
    for (int r = 0; r < h2_rank; ++r) v[r] = mod(-src[r], q);
  }
  return v;
}

void CohomologyData::validate() const {
  require_modulus(q);
  if (n < 0 || n > kMaxTruncGenerators) throw ValidationError("cohomology data: n out of range");
  if (h2_rank < 0 || h2_rank > kMaxAmbientDim) throw ValidationError("cohomology data: h2_rank out of range");
  if (static_cast<int>(bockstein.size()) != n)
    throw ValidationError("cohomology data: expected " + std::to_string(n) + " bockstein vectors");
  if (static_cast<int>(cup.size()) != pair_count(n))
    throw ValidationError("cohomology data: expected " + std::to_string(pair_count(n)) + " cup vectors");
  auto check = [&](const std::vector<int>& v, const char* what) {
    if (static_cast<int>(v.size()) != h2_rank)
      throw ValidationError(std::string("cohomology data: ") + what + " vector length differs from h2_rank");
    for (int x : v)
      if (x < 0 || x >= q) throw ValidationError(std::string("cohomology data: ") + what + " entry not reduced mod q");
  };
  for (const auto& v : bockstein) check(v, "bockstein");
  for (const auto& v : cup) check(v, "cup");
}

ZqMatrix lambda_matrix(const CohomologyData& cd) {
  cd.validate();
  const int m = cd.n + pair_count(cd.n);
  ZqMatrix lam(cd.q, cd.h2_rank, m);
  for (int r = 0; r < cd.h2_rank; ++r) {
    for (int k = 0; k < cd.n; ++k) lam.set(r, k, cd.bockstein[k][r]);
    for (int i = 0; i < pair_count(cd.n); ++i) lam.set(r, cd.n + i, cd.cup[i][r]);
  }
  return lam;
}

TruncGroup reconstruct_g3(const CohomologyData& cd) {
  ZqMatrix lam = lambda_matrix(cd);
  ZqSubspace ker_f = kernel(lam);
  ZqSubspace w = annihilator(ker_f);
  return TruncGroup::free_truncation(cd.n, cd.q).quotient(w);
}

CohomologyExtraction extract_cohomology(const Presentation& pres) {
  CohomologyExtraction ex;
  ex.analysis = relator_subspace(pres);
  const RelatorAnalysis& a = ex.analysis;
  if (a.mixed_exponent()) return ex;

  const int n = a.n(), q = pres.q;
  const int m = n + pair_count(n);
  std::vector<std::vector<int>> rows;
  ZqSubspace span = ZqSubspace::zero(q, m);
  for (std::size_t i = 0; i < a.images.size(); ++i) {
    if (a.status[i] != RelatorStatus::Kept) continue;
    const auto& v = a.images[i];
    if (span.contains(v)) continue;
    rows.push_back(v);
    ex.row_relators.push_back(static_cast<int>(i));
    span = span_of(q, m, rows);
  }

  CohomologyData cd;
  cd.q = q;
  cd.n = n;
  cd.h2_rank = static_cast<int>(rows.size());
  cd.bockstein.assign(n, std::vector<int>(cd.h2_rank));
  cd.cup.assign(pair_count(n), std::vector<int>(cd.h2_rank));
  for (int r = 0; r < cd.h2_rank; ++r) {
    for (int k = 0; k < n; ++k) cd.bockstein[k][r] = rows[r][k];
    for (int i = 0; i < pair_count(n); ++i) cd.cup[i][r] = rows[r][n + i];
  }
  for (int k : a.w.module_exponents()) {
    std::int64_t o = 1;
    for (int j = 0; j < k; ++j) o *= pres.p;
    cd.h2_divisors.push_back(o);
  }
  ex.data = std::move(cd);
  return ex;
}

CohomologyData cohomology_data_from_presentation(const Presentation& pres) {
  CohomologyExtraction ex = extract_cohomology(pres);
  if (!ex.data)
    throw ValidationError("outside the elementary G^[2] hypothesis: some relator has a non-unit exponent outside qZ");
  return *ex.data;
}

std::string to_string(ImageStatus s) {
  switch (s) {
    case ImageStatus::Independent: return "independent";
    case ImageStatus::Dependent: return "dependent";
    case ImageStatus::Zero: return "zero";
    case ImageStatus::Eliminated: return "eliminated";
    case ImageStatus::Trivial: return "trivial";
  }
  return "?";
}

std::string to_string(TestStatus s) {
  switch (s) {
    case TestStatus::Obstructed: return "obstructed";
    case TestStatus::Passed: return "passed";
    case TestStatus::Skipped: return "skipped";
  }
  return "?";
}

namespace {

std::string nontriviality_certificate(const Presentation& pres, int i, int class_bound) {
  const Word& w = pres.relators[i];
  try {
    HallBasis basis(pres.n(), class_bound);
    if (auto cert = word_nontriviality_certificate(w, basis))
      return "hall weight " + std::to_string(cert->weight) + ": " + basis.to_string(cert->leading, pres.generators);
  } catch (const ValidationError&) {
    // coefficient overflow or bounds: fall through to the weaker certificate
  }
  // a nonempty reduced word is nontrivial in the pro-p completion (free groups are residually p)
  if (!reduced_syllables(w).empty()) return "free-reduction: " + to_string(free_reduce(w), pres.generators);
  return {};
}

}  // namespace

RelatorImageReport check_relator_images(const Presentation& pres, int class_bound) {
  RelatorImageReport rep;
  rep.q = pres.q;
  rep.class_bound = class_bound;
  RelatorAnalysis a = relator_subspace(pres);
  if (a.mixed_exponent())
    throw ValidationError("outside the elementary G^[2] hypothesis: some relator has a non-unit exponent outside qZ");
  rep.n = a.n();
  rep.log = a.log;

  const int m = a.n() + pair_count(a.n());
  ZqSubspace span = ZqSubspace::zero(pres.q, m);
  int kept = 0;
  for (std::size_t i = 0; i < a.status.size(); ++i) {
    RelatorReport r;
    r.relator = static_cast<int>(i);
    if (a.status[i] == RelatorStatus::Eliminated) {
      r.status = ImageStatus::Eliminated;
    } else if (a.status[i] == RelatorStatus::DroppedTrivial) {
      r.status = ImageStatus::Trivial;
    } else {
      ++kept;
      r.image = a.images[i];
      const bool zero = std::all_of(r.image.begin(), r.image.end(), [](int x) { return x == 0; });
      if (zero) {
        r.status = ImageStatus::Zero;
      } else {
        const bool full_order = std::any_of(r.image.begin(), r.image.end(), [&](int x) { return x % pres.p != 0; });
        ZqSubspace grown = subspace_sum(span, span_of(pres.q, m, {r.image}));
        const bool direct = grown.log_cardinality() == span.log_cardinality() + pres.d;
        r.status = full_order && direct ? ImageStatus::Independent : ImageStatus::Dependent;
        span = grown;
      }
      if (r.status != ImageStatus::Independent) {
        rep.injective_on_relators = false;
        r.certificate = nontriviality_certificate(pres, r.relator, class_bound);
        if (!r.certificate.empty()) rep.failure_witnessed = true;
      }
    }
    rep.relators.push_back(std::move(r));
  }
  rep.assumptions.push_back("class bound " + std::to_string(class_bound) + " for Hall certificates");
  if (!a.minimal_input()) rep.assumptions.push_back("presentation minimized by generator elimination");
  if (rep.failure_witnessed && kept >= 2)
    rep.assumptions.push_back("the relators are independent modulo R^q[R,S] (minimal relator set)");
  return rep;
}

ScreenVerdict obstruction_screen(const Presentation& pres, const ScreenOptions& opts) {
  if (pres.d != 1) throw ValidationError("the obstruction screen needs q prime; got q=" + std::to_string(pres.q));
  ScreenVerdict v;
  v.q = pres.q;
  v.class_bound = opts.class_bound;
  RelatorImageReport t = check_relator_images(pres, opts.class_bound);
  v.n = t.n;

  int kept = 0, zero = 0, eliminated = 0;
  std::string zero_witness, dep_witness;
  bool dependent = false;
  for (const auto& r : t.relators) {
    switch (r.status) {
      case ImageStatus::Eliminated:
        ++eliminated;
        break;
      case ImageStatus::Trivial:
        break;
      case ImageStatus::Zero:
        ++kept;
        ++zero;
        dependent = dependent || !r.certificate.empty();
        zero_witness += (zero_witness.empty() ? "" : "; ") + std::string("relator ") + std::to_string(r.relator + 1) +
                        " in S^(3), " + r.certificate;
        if (!r.certificate.empty())
          dep_witness += (dep_witness.empty() ? "" : "; ") + std::string("relator ") + std::to_string(r.relator + 1) +
                         " has zero image, " + r.certificate;
        break;
      case ImageStatus::Dependent:
        ++kept;
        if (!r.certificate.empty()) {
          dependent = true;
          dep_witness += (dep_witness.empty() ? "" : "; ") + std::string("relator ") + std::to_string(r.relator + 1) +
                         " has dependent image, " + r.certificate;
        }
        break;
      case ImageStatus::Independent:
        ++kept;
        break;
    }
  }

  ScreenTest t1{"relators_in_S3", TestStatus::Passed, ""};
  const bool all_zero_certified =
      kept > 0 && zero == kept && eliminated == 0 &&
      std::all_of(t.relators.begin(), t.relators.end(),
                  [](const RelatorReport& r) { return r.status != ImageStatus::Zero || !r.certificate.empty(); });
  if (all_zero_certified) {
    t1.status = TestStatus::Obstructed;
    t1.witness = zero_witness;
  } else {
    t1.witness = kept == 0 ? "no nontrivial relators" : "some relator has nonzero image in S^(2)/S^(3)";
  }
  v.tests.push_back(t1);

  ScreenTest t2{"dependent_relators", TestStatus::Passed, ""};
  if (t1.status == TestStatus::Obstructed) {
    t2.status = TestStatus::Skipped;
    t2.witness = "subsumed by relators_in_S3";
  } else if (dependent) {
    t2.status = TestStatus::Obstructed;
    t2.witness = dep_witness;
    if (kept >= 2) v.assumptions.push_back("the relators are independent modulo R^q[R,S] (minimal relator set)");
  } else {
    t2.witness = "relator images are independent";
  }
  v.tests.push_back(t2);

  ScreenTest t3{"dimension", TestStatus::Skipped, ""};
  if (!opts.cd_bound) {
    t3.witness = "no cd bound supplied";
  } else if (pres.p == 2 && !opts.torsion_free) {
    t3.witness = "p=2 requires the torsion-free flag";
  } else {
    v.assumptions.push_back("cd(G) = " + std::to_string(*opts.cd_bound) + " (user supplied)");
    if (pres.p == 2) v.assumptions.push_back("G is torsion-free (user supplied)");
    if (t.n < *opts.cd_bound) {
      t3.status = TestStatus::Obstructed;
      t3.witness = "dim H^1 = " + std::to_string(t.n) + " < cd = " + std::to_string(*opts.cd_bound);
    } else {
      t3.status = TestStatus::Passed;
      t3.witness = "dim H^1 = " + std::to_string(t.n) + " >= cd = " + std::to_string(*opts.cd_bound);
    }
  }
  v.tests.push_back(t3);

  for (const auto& s : t.assumptions)
    if (std::find(v.assumptions.begin(), v.assumptions.end(), s) == v.assumptions.end()) v.assumptions.push_back(s);
  v.obstructed = std::any_of(v.tests.begin(), v.tests.end(), [](const ScreenTest& x) { return x.status == TestStatus::Obstructed; });
  return v;
}

// ---------------------------------------------------------------------------
// Morphisms

namespace {

int rank_mod_p(std::vector<std::vector<int>> a, int p) {
  int rank = 0;
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  for (auto& row : a)
    for (int& x : row) x = mod(x, p);
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][c]) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[rank], a[piv]);
    const int inv = inverse_unit(a[rank][c], p);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || !a[r][c]) continue;
      const int f = a[r][c] * inv % p;
      for (int cc = 0; cc < cols; ++cc) a[r][cc] = mod(a[r][cc] - static_cast<std::int64_t>(f) * a[rank][cc], p);
    }
    ++rank;
  }
  return rank;
}

// span{ c_kl } + span{ kappa * b_k } inside the dual central layer
ZqSubspace decomposable_part(int n, int q) {
  const int m = n + pair_count(n);
  const int kappa = q % 2 == 0 ? q / 2 : 0;
  std::vector<std::vector<int>> rows;
  for (int k = 0; k < n; ++k) {
    std::vector<int> v(m, 0);
    v[k] = kappa;
    rows.push_back(v);
  }
  for (int i = 0; i < pair_count(n); ++i) {
    std::vector<int> v(m, 0);
    v[n + i] = 1;
    rows.push_back(v);
  }
  return span_of(q, m, rows);
}

}  // namespace

MorphismReport morphism_check(const RelatorAnalysis& a1, const RelatorAnalysis& a2,
                              const std::vector<TruncElement>& images) {
  if (a1.q != a2.q) throw ValidationError("morphism between presentations with different q");
  const TruncGroup g1 = group_of(a1), g2 = group_of(a2);
  const TruncGroup f1 = TruncGroup::free_truncation(a1.n(), a1.q);
  const TruncGroup f2 = TruncGroup::free_truncation(a2.n(), a2.q);
  if (static_cast<int>(images.size()) != a1.n()) throw DimensionError("one image per surviving generator required");
  const int q = a1.q, p = g1.p();
  const int n1 = a1.n(), n2 = a2.n();

  ZqMatrix pibar = f1.central_map(f2, images);
  if (!a2.w.contains(map_subspace(pibar, a1.w)))
    throw ValidationError("the generator images do not respect the relators");

  MorphismReport rep;
  rep.n1 = n1;
  rep.n2 = n2;
  rep.order1 = g1.order_string();
  rep.order2 = g2.order_string();

  std::vector<std::vector<int>> amat(n2, std::vector<int>(n1));
  for (int j = 0; j < n1; ++j)
    for (int k = 0; k < n2; ++k) amat[k][j] = images[j].e[k] % q;
  const int rk = rank_mod_p(amat, p);
  rep.pi2_iso = n1 == n2 && rk == n1;
  rep.pi3_iso = rk == n2 && g1.order_log() == g2.order_log();
  rep.h1_iso = rep.pi2_iso;

  const ZqSubspace d1 = decomposable_part(n1, q), d2 = decomposable_part(n2, q);
  const ZqSubspace ann1 = annihilator(a1.w), ann2 = annihilator(a2.w);
  const ZqSubspace ann_img = annihilator(map_subspace(pibar, a1.w));
  rep.dec2_injective = ann2.contains(subspace_intersect(d2, ann_img));
  rep.dec2_surjective = subspace_sum(map_subspace(pibar.transpose(), d2), ann1).contains(d1);

  rep.cond_b = rep.pi3_iso;
  rep.cond_d = rep.h1_iso && rep.dec2_injective && rep.dec2_surjective;
  return rep;
}

MorphismReport morphism_check(const Presentation& pres1, const Presentation& pres2, const std::vector<Word>& images) {
  if (pres1.q != pres2.q) throw ValidationError("morphism between presentations with different q");
  if (static_cast<int>(images.size()) != pres1.n())
    throw ValidationError("expected " + std::to_string(pres1.n()) + " generator images");
  RelatorAnalysis a1 = relator_subspace(pres1), a2 = relator_subspace(pres2);
  const TruncGroup g2 = group_of(a2);
  group_of(a1);
  const TruncGroup s1 = TruncGroup::free_truncation(pres1.n(), pres1.q);
  const TruncGroup s2 = TruncGroup::free_truncation(pres2.n(), pres2.q);
  const TruncGroup f2 = TruncGroup::free_truncation(a2.n(), a2.q);

  // image of every original generator of pres1 inside the reduced S2^[3]
  std::vector<TruncElement> full(pres1.n());
  for (int i = 0; i < pres1.n(); ++i) full[i] = s2.apply_hom(f2, a2.origin, s2.evaluate(images[i]));
  for (std::size_t r = 0; r < pres1.relators.size(); ++r) {
    TruncElement x = s1.apply_hom(g2, full, s1.evaluate(pres1.relators[r]));
    if (x != g2.identity())
      throw ValidationError("relator " + std::to_string(r + 1) + " (" + to_string(pres1.relators[r], pres1.generators) +
                            ") is not mapped to the identity");
  }
  std::vector<TruncElement> reduced;
  for (int k : a1.surviving) reduced.push_back(full[k]);
  return morphism_check(a1, a2, reduced);
}

}  // namespace gq3
