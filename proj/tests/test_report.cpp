#include <gtest/gtest.h>

#include "gq3/errors.hpp"
#include "gq3/report.hpp"
#include "oracles.hpp"

using namespace gq3;

namespace {

Presentation pres(int q, int n, std::vector<std::string> rels) { return make_presentation(q, oracle::gen_names(n), rels); }

}  // namespace

TEST(Report, HeaderCarriesContext) {
  Json h = report_header(17, 3, 2, 5);
  EXPECT_EQ(h["seed"], 17);
  EXPECT_EQ(h["q"], 3);
  EXPECT_EQ(h["n"], 2);
  EXPECT_EQ(h["class_bound"], 5);
  EXPECT_TRUE(h.contains("version"));
  EXPECT_EQ(h.begin().key(), "version");
}

TEST(Report, TruncateFrozenFields) {
  Json j = truncate_report(pres(3, 2, {"x1^3 [x1,x2]"}), 4);
  EXPECT_EQ(j["seed"], 4);
  EXPECT_EQ(j["invariants"]["order"], "81");
  EXPECT_EQ(j["invariants"]["abelianization"], Json::parse("[9,3]"));
  EXPECT_EQ(j["relators"][0]["image"], Json::parse("[1,0,1]"));
  EXPECT_EQ(j["relators"][0]["status"], "kept");
  EXPECT_EQ(j["layer_coordinates"], Json::parse(R"(["u_x1","u_x2","w_x1,x2"])"));

  Json e = truncate_report(make_presentation(3, {"a", "b", "c"}, {"a b^3", "[a,b] c^3"}), 0);
  EXPECT_EQ(e["minimality"]["minimal"], false);
  EXPECT_EQ(e["minimality"]["eliminated"][0]["generator"], "a");
  EXPECT_EQ(e["minimality"]["eliminated"][0]["relator"], 1);
  EXPECT_EQ(e["surviving_generators"], Json::parse(R"(["b","c"])"));

  Json m = truncate_report(pres(4, 2, {"x1^2 [x1,x2]"}), 0);
  EXPECT_TRUE(m.contains("hypothesis"));
  EXPECT_FALSE(m.contains("invariants"));
}

TEST(Report, ByteDeterministic) {
  Presentation p = pres(2, 3, {"x1^2 x2^4 [x2,x3]"});
  EXPECT_EQ(truncate_report(p, 9).dump(2), truncate_report(p, 9).dump(2));
  EXPECT_EQ(cohomology_report(p, 9).dump(2), cohomology_report(p, 9).dump(2));
  EXPECT_EQ(relator_images_report(p, 5, 9).dump(2), relator_images_report(p, 5, 9).dump(2));
  EXPECT_NE(truncate_report(p, 9).dump(), truncate_report(p, 10).dump());
}

TEST(Report, CohomologyJsonRoundTrip) {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 100; ++t) {
    const int q = std::vector<int>{2, 3, 4, 5, 8, 9}[t % 6], n = oracle::rand_int(rng, 1, 4), h = oracle::rand_int(rng, 0, 3);
    CohomologyData cd{q, n, h, std::vector<std::vector<int>>(n, std::vector<int>(h)),
                      std::vector<std::vector<int>>(n * (n - 1) / 2, std::vector<int>(h)), {}};
    for (auto* table : {&cd.bockstein, &cd.cup})
      for (auto& v : *table)
        for (int& x : v) x = oracle::rand_int(rng, 0, q - 1);
    CohomologyData back = cohomology_data_from_json(Json::parse(to_json(cd).dump()));
    EXPECT_EQ(back.q, cd.q);
    EXPECT_EQ(back.n, cd.n);
    EXPECT_EQ(back.h2_rank, cd.h2_rank);
    EXPECT_EQ(back.bockstein, cd.bockstein);
    EXPECT_EQ(back.cup, cd.cup);
  }
}

TEST(Report, CohomologyJsonReducesAndRejects) {
  Json j = Json::parse(R"({"q":3,"n":2,"h2_rank":1,"bockstein":[[4],[0]],"cup":[[-1]]})");
  CohomologyData cd = cohomology_data_from_json(j);
  EXPECT_EQ(cd.bockstein[0][0], 1);
  EXPECT_EQ(cd.cup[0][0], 2);
  EXPECT_THROW(cohomology_data_from_json(Json::parse(R"({"q":3,"n":2})")), ParseError);
  EXPECT_THROW(cohomology_data_from_json(Json::parse(R"({"q":"three","n":1,"h2_rank":0,"bockstein":[[]],"cup":[]})")),
               ParseError);
  EXPECT_THROW(cohomology_data_from_json(Json::parse(R"({"q":3,"n":2,"h2_rank":1,"bockstein":[[1]],"cup":[[1]]})")),
               ValidationError);
}

TEST(Report, ScreenEchoesAssumptions) {
  ScreenOptions o;
  o.cd_bound = 3;
  Json j = screen_report(pres(3, 2, {}), o, 0);
  EXPECT_EQ(j["verdict"], "obstructed");
  EXPECT_TRUE(j["assumptions"].is_array());
  EXPECT_FALSE(j["assumptions"].empty());
  EXPECT_EQ(j["tests"].size(), 3u);
}

TEST(Report, AlgebraAndComparison) {
  FieldPreset f = FieldPreset::parse("tame_local:5");
  Json a = to_json(milnor_mod_q(f, 2, 3));
  EXPECT_EQ(a["ranks"], Json::parse("[2,1,0]"));
  EXPECT_EQ(a["degrees"]["2"]["divisors"], Json::parse("[2]"));
  Json g = to_json(galois_symbol_compare(f, 2, matched_presentation(f, 2), default_correspondence(f), 3));
  EXPECT_EQ(g["isomorphism"], true);
  EXPECT_EQ(g["degrees"].size(), 3u);
}
