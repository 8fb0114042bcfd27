#include "gq3/report.hpp"

#include <algorithm>

#include "gq3/errors.hpp"
#include "gq3/version.hpp"

namespace gq3 {

namespace {

const char* status_name(RelatorStatus s) {
  switch (s) {
    case RelatorStatus::Kept: return "kept";
    case RelatorStatus::Eliminated: return "eliminated";
    case RelatorStatus::DroppedTrivial: return "dropped_trivial";
  }
  return "?";
}

Json layer_labels(const std::vector<std::string>& names) {
  const int n = static_cast<int>(names.size());
  Json out = Json::array();
  for (int k = 0; k < n; ++k) out.push_back("u_" + names[k]);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) out.push_back("w_" + names[k] + "," + names[l]);
  return out;
}

Json analysis_json(const Presentation& pres, const RelatorAnalysis& a) {
  Json j;
  j["generators"] = pres.generators;
  j["surviving_generators"] = a.surviving_names;
  Json elim = Json::array();
  for (const auto& e : a.eliminations)
    elim.push_back({{"generator", pres.generators[e.generator]}, {"relator", e.relator + 1}});
  j["minimality"] = {{"minimal", a.minimal_input()}, {"eliminated", elim}};
  j["layer_coordinates"] = layer_labels(a.surviving_names);
  Json rels = Json::array();
  for (std::size_t i = 0; i < pres.relators.size(); ++i) {
    Json r;
    r["index"] = i + 1;
    r["word"] = to_string(pres.relators[i], pres.generators);
    r["status"] = status_name(a.status[i]);
    if (!a.images[i].empty()) r["image"] = a.images[i];
    if (std::find(a.mixed_relators.begin(), a.mixed_relators.end(), static_cast<int>(i)) != a.mixed_relators.end())
      r["mixed_exponent"] = true;
    rels.push_back(r);
  }
  j["relators"] = rels;
  j["log"] = a.log;
  return j;
}

}  // namespace

Json report_header(std::uint64_t seed, int q, int n, int class_bound) {
  Json j;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["q"] = q;
  j["n"] = n;
  j["class_bound"] = class_bound;
  return j;
}

Json to_json(const ZqSubspace& w) {
  Json j;
  j["ambient_dim"] = w.ambient_dim();
  j["basis"] = w.basis().row_vectors();
  j["log_cardinality"] = w.log_cardinality();
  j["module_exponents"] = w.module_exponents();
  return j;
}

Json to_json(const GroupInvariants& inv) {
  Json j;
  j["order"] = inv.order;
  j["order_log_p"] = inv.order_log;
  j["abelianization"] = inv.abelianization;
  j["center_order_log_p"] = inv.center_order_log;
  j["exponent"] = inv.exponent;
  return j;
}

Json to_json(const CohomologyData& cd) {
  Json j;
  j["q"] = cd.q;
  j["n"] = cd.n;
  j["h2_rank"] = cd.h2_rank;
  j["kappa"] = cd.kappa();
  j["bockstein"] = cd.bockstein;
  j["cup"] = cd.cup;
  if (!cd.h2_divisors.empty()) j["h2_divisors"] = cd.h2_divisors;
  return j;
}

CohomologyData cohomology_data_from_json(const Json& j) {
  try {
    CohomologyData cd;
    cd.q = j.at("q").get<int>();
    cd.n = j.at("n").get<int>();
    cd.h2_rank = j.at("h2_rank").get<int>();
    require_modulus(cd.q);
    cd.bockstein = j.at("bockstein").get<std::vector<std::vector<int>>>();
    cd.cup = j.contains("cup") ? j.at("cup").get<std::vector<std::vector<int>>>() : std::vector<std::vector<int>>{};
    for (auto* table : {&cd.bockstein, &cd.cup})
      for (auto& v : *table)
        for (int& x : v) x = mod(x, cd.q);
    cd.validate();
    return cd;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("cohomology data JSON: ") + e.what());
  }
}

Json truncate_report(const Presentation& pres, std::uint64_t seed) {
  RelatorAnalysis a = relator_subspace(pres);
  Json j = report_header(seed, pres.q, a.n(), kDefaultClassBound);
  j["command"] = "truncate";
  j.update(analysis_json(pres, a));
  if (a.mixed_exponent()) {
    j["hypothesis"] = "outside the elementary G^[2] case: some relator has a non-unit exponent outside qZ";
    return j;
  }
  TruncGroup g = group_of(a);
  j["relator_subspace"] = to_json(a.w);
  j["invariants"] = to_json(group_invariants(g));
  return j;
}

Json cohomology_report(const Presentation& pres, std::uint64_t seed) {
  CohomologyExtraction ex = extract_cohomology(pres);
  Json j = report_header(seed, pres.q, ex.analysis.n(), kDefaultClassBound);
  j["command"] = "cohomology";
  j["generators"] = ex.analysis.surviving_names;
  if (!ex.data) {
    j["hypothesis"] = "outside the elementary G^[2] case: some relator has a non-unit exponent outside qZ";
    return j;
  }
  Json rows = Json::array();
  for (int r : ex.row_relators) rows.push_back(r + 1);
  j["h2_row_relators"] = rows;
  j["cohomology"] = to_json(*ex.data);
  j["lambda"] = lambda_matrix(*ex.data).row_vectors();
  return j;
}

Json relator_images_report(const Presentation& pres, int class_bound, std::uint64_t seed) {
  RelatorImageReport t = check_relator_images(pres, class_bound);
  Json j = report_header(seed, pres.q, t.n, class_bound);
  j["command"] = "equiv";
  Json rels = Json::array();
  for (const auto& r : t.relators) {
    Json x;
    x["index"] = r.relator + 1;
    x["word"] = to_string(pres.relators[r.relator], pres.generators);
    x["status"] = to_string(r.status);
    if (!r.image.empty()) x["image"] = r.image;
    if (!r.certificate.empty()) x["certificate"] = r.certificate;
    rels.push_back(x);
  }
  j["relators"] = rels;
  j["relator_images_independent"] = t.injective_on_relators;
  j["condition_c_failure_witnessed"] = t.failure_witnessed;
  j["assumptions"] = t.assumptions;
  j["log"] = t.log;
  return j;
}

Json screen_report(const Presentation& pres, const ScreenOptions& opts, std::uint64_t seed) {
  ScreenVerdict v = obstruction_screen(pres, opts);
  Json j = report_header(seed, v.q, v.n, v.class_bound);
  j["command"] = "screen";
  j["verdict"] = v.verdict();
  Json tests = Json::array();
  for (const auto& t : v.tests) tests.push_back({{"name", t.name}, {"status", to_string(t.status)}, {"witness", t.witness}});
  j["tests"] = tests;
  j["assumptions"] = v.assumptions;
  return j;
}

Json to_json(const MorphismReport& m) {
  Json j;
  j["n1"] = m.n1;
  j["n2"] = m.n2;
  j["order1"] = m.order1;
  j["order2"] = m.order2;
  j["pi2_isomorphism"] = m.pi2_iso;
  j["pi3_isomorphism"] = m.pi3_iso;
  j["h1_isomorphism"] = m.h1_iso;
  j["dec2_injective"] = m.dec2_injective;
  j["dec2_surjective"] = m.dec2_surjective;
  j["condition_b"] = m.cond_b;
  j["condition_d"] = m.cond_d;
  j["b_iff_d"] = m.agree();
  return j;
}

Json to_json(const GradedAlgebra& a) {
  Json j;
  j["q"] = a.q();
  j["basis"] = a.names();
  j["degree_bound"] = a.degree_bound();
  j["graded_commutative"] = a.graded_commutative();
  j["ranks"] = a.ranks();
  Json deg;
  for (int r = 1; r <= a.degree_bound(); ++r) {
    deg[std::to_string(r)] = {{"divisors", a.divisors(r)}, {"relations", a.relations(r).basis().row_vectors()}};
  }
  j["degrees"] = deg;
  return j;
}

Json to_json(const GaloisComparison& g) {
  Json j;
  j["field"] = g.field;
  j["q"] = g.q;
  j["r_max"] = g.r_max;
  Json corr = Json::object();
  for (const auto& [k, h] : g.correspondence) corr[k] = h;
  j["correspondence"] = corr;
  Json deg = Json::array();
  for (const auto& d : g.degrees)
    deg.push_back({{"degree", d.degree}, {"k_divisors", d.k_divisors}, {"h_divisors", d.h_divisors}, {"equal", d.equal}});
  j["degrees"] = deg;
  j["isomorphism"] = g.isomorphism;
  if (!g.isomorphism) j["first_failure_degree"] = g.first_failure;
  return j;
}

}  // namespace gq3
