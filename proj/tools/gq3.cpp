#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gq3/acceptance.hpp"
#include "gq3/errors.hpp"
#include "gq3/report.hpp"
#include "gq3/version.hpp"

using namespace gq3;

namespace {

enum Exit { kOk = 0, kNegative = 1, kParse = 2, kValidation = 3 };

struct Global {
  std::uint64_t seed = 0;
  std::string output;
  std::optional<int> q;
  int class_bound = kDefaultClassBound;
  std::int64_t budget = 0;
};

void emit(const Global& g, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.output, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + g.output);
  f << text;
}

Presentation load(const std::string& path, const Global& g) {
  Presentation pres = load_presentation(path);
  if (g.q) {
    PrimePower pp = require_modulus(*g.q);
    pres.q = pp.q;
    pres.p = pp.p;
    pres.d = pp.d;
  }
  return pres;
}

std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

const char* kMixedWarning =
    "warning: a relator has an exponent that is neither a unit nor divisible by q; the reduction to a central "
    "subspace does not apply\n";

int cmd_truncate(const Global& g, const std::string& file) {
  Presentation pres = load(file, g);
  Json j = truncate_report(pres, g.seed);
  j["class_bound"] = g.class_bound;
  emit(g, j);
  if (j.contains("hypothesis")) {
    std::cerr << kMixedWarning;
    return kValidation;
  }
  std::cerr << "G^[3]: order " << j["invariants"]["order"].get<std::string>() << ", abelianization ("
            << join(j["invariants"]["abelianization"].get<std::vector<std::int64_t>>()) << "), exponent "
            << j["invariants"]["exponent"].get<std::int64_t>() << "\n";
  return kOk;
}

int cmd_cohomology(const Global& g, const std::string& file) {
  Presentation pres = load(file, g);
  Json j = cohomology_report(pres, g.seed);
  j["class_bound"] = g.class_bound;
  emit(g, j);
  if (j.contains("hypothesis")) {
    std::cerr << kMixedWarning;
    return kValidation;
  }
  std::cerr << "H^2 rank " << j["cohomology"]["h2_rank"].get<int>() << " over Z/" << pres.q << "\n";
  return kOk;
}

int cmd_reconstruct(const Global& g, const std::string& file, const std::string& cd_path) {
  if (file.empty() == cd_path.empty()) throw CLI::ValidationError("reconstruct", "give exactly one of FILE or --cd");
  if (!cd_path.empty()) {
    std::ifstream in(cd_path);
    if (!in) throw ParseError("cannot open " + cd_path);
    Json raw;
    try {
      raw = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("cohomology data JSON: ") + e.what());
    }
    const Json& body = raw.contains("cohomology") ? raw["cohomology"] : raw;
    CohomologyData cd = cohomology_data_from_json(body);
    TruncGroup rec = reconstruct_g3(cd);
    Json j = report_header(g.seed, cd.q, cd.n, g.class_bound);
    j["command"] = "reconstruct";
    j["cohomology"] = to_json(cd);
    j["relator_subspace"] = to_json(rec.w());
    j["invariants"] = to_json(group_invariants(rec));
    emit(g, j);
    std::cerr << "reconstructed G^[3] of order " << rec.order_string() << "\n";
    return kOk;
  }
  Presentation pres = load(file, g);
  CohomologyExtraction ex = extract_cohomology(pres);
  Json j = report_header(g.seed, pres.q, ex.analysis.n(), g.class_bound);
  j["command"] = "reconstruct";
  if (!ex.data) {
    j["hypothesis"] = "outside the elementary G^[2] case: some relator has a non-unit exponent outside qZ";
    emit(g, j);
    std::cerr << kMixedWarning;
    return kValidation;
  }
  TruncGroup direct = group_of(ex.analysis);
  TruncGroup rec = reconstruct_g3(*ex.data);
  const bool equal = rec.w() == ex.analysis.w;
  j["cohomology"] = to_json(*ex.data);
  j["direct_subspace"] = to_json(ex.analysis.w);
  j["reconstructed_subspace"] = to_json(rec.w());
  j["round_trip"] = equal ? "equal" : "different";
  j["invariants"] = to_json(group_invariants(rec));
  if (!equal) {
    std::optional<bool> iso = brute_isomorphic(direct, rec, g.budget);
    j["brute_isomorphic"] = iso ? Json(*iso) : Json("budget exceeded");
  }
  emit(g, j);
  std::cerr << "round-trip: " << (equal ? "equal" : "different") << "\n";
  return equal ? kOk : kNegative;
}

int cmd_equiv(const Global& g, const std::string& file) {
  Presentation pres = load(file, g);
  Json j = relator_images_report(pres, g.class_bound, g.seed);
  emit(g, j);
  const bool failed = j["condition_c_failure_witnessed"].get<bool>();
  std::cerr << (failed ? "relator images are not independent: failure witnessed\n"
                       : "no failure witnessed among the relators\n");
  return failed ? kNegative : kOk;
}

int cmd_morphism(const Global& g, const std::string& f1, const std::string& f2, const std::vector<std::string>& words) {
  Presentation p1 = load(f1, g), p2 = load(f2, g);
  std::vector<Word> images;
  for (const auto& w : words) images.push_back(parse_word(w, p2));
  MorphismReport m = morphism_check(p1, p2, images);
  Json j = report_header(g.seed, p1.q, p1.n(), g.class_bound);
  j["command"] = "morphism";
  j["images"] = words;
  j.update(to_json(m));
  emit(g, j);
  std::cerr << "(b) " << (m.cond_b ? "holds" : "fails") << ", (d) " << (m.cond_d ? "holds" : "fails") << "\n";
  return m.agree() ? kOk : kNegative;
}

int cmd_screen(const Global& g, const std::string& file, std::optional<int> cd, bool torsion_free) {
  Presentation pres = load(file, g);
  ScreenOptions opts;
  opts.cd_bound = cd;
  opts.torsion_free = torsion_free;
  opts.class_bound = g.class_bound;
  Json j = screen_report(pres, opts, g.seed);
  emit(g, j);
  std::cerr << "verdict: " << j["verdict"].get<std::string>() << "\n";
  return j["verdict"] == "obstructed" ? kNegative : kOk;
}

MilnorOptions doubled(MilnorOptions o) {
  o.window *= 2;
  o.two_adic_precision += 2;
  return o;
}

int cmd_kmilnor(const Global& g, const std::string& field, int q, int rmax, const MilnorOptions& opts) {
  FieldPreset f = FieldPreset::parse(field);
  GradedAlgebra k = milnor_mod_q(f, q, rmax, opts);
  const bool stable = steinberg_relations(f, q, opts) == steinberg_relations(f, q, doubled(opts));
  Json j = report_header(g.seed, q, k.gen_count(), g.class_bound);
  j["command"] = "kmilnor";
  j["field"] = f.tag();
  j["window"] = opts.window;
  j["two_adic_precision"] = opts.two_adic_precision;
  j["algebra"] = to_json(k);
  j["window_doubling_stable"] = stable;
  emit(g, j);
  std::cerr << "K^M_*/" << q << " of " << f.tag() << ": ranks";
  for (int r : k.ranks()) std::cerr << " " << r;
  std::cerr << (stable ? "\n" : " (unstable under window doubling)\n");
  return stable ? kOk : kNegative;
}

std::vector<std::pair<std::string, std::string>> parse_map(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto c = item.rfind(':');
    if (c == std::string::npos || c == 0 || c + 1 == item.size())
      throw ParseError("--map entries look like name:generator, got '" + item + "'");
    out.emplace_back(item.substr(0, c), item.substr(c + 1));
  }
  return out;
}

int cmd_galois(const Global& g, const std::string& field, const std::string& file, const std::string& map, int rmax,
               const MilnorOptions& opts) {
  FieldPreset f = FieldPreset::parse(field);
  Presentation pres = load(file, g);
  auto corr = map.empty() ? default_correspondence(f) : parse_map(map);
  GaloisComparison c = galois_symbol_compare(f, pres.q, pres, corr, rmax, opts);
  Json j = report_header(g.seed, pres.q, pres.n(), g.class_bound);
  j["command"] = "galois-check";
  j.update(to_json(c));
  emit(g, j);
  if (c.isomorphism)
    std::cerr << "graded isomorphism verified in degrees <= " << rmax << "\n";
  else
    std::cerr << "mismatch in degree " << c.first_failure << "\n";
  return c.isomorphism ? kOk : kNegative;
}

int cmd_selftest(const Global& g) {
  std::vector<CriterionResult> all = run_acceptance(g.seed, &std::cerr);
  Json j = report_header(g.seed, 0, 0, g.class_bound);
  j.erase("q");
  j.erase("n");
  j["command"] = "selftest";
  Json rows = Json::array();
  bool ok = true;
  for (const auto& r : all) {
    rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    ok = ok && r.pass;
  }
  j["criteria"] = rows;
  j["all_passed"] = ok;
  emit(g, j);
  return ok ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated pro-p group quotients, their low-degree cohomology, and mod-q Milnor K-rings"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Global g;
  std::optional<int> q_override;
  app.add_option("--seed", g.seed, "Seed recorded in reports and used by randomized corpora")->capture_default_str();
  app.add_option("-o,--output", g.output, "Write the JSON report here instead of stdout");
  app.add_option("--q", q_override, "Override the modulus q of input presentations")->check(CLI::Range(2, 32));
  app.add_option("--class-bound", g.class_bound, "Class bound for Hall certificates")
      ->check(CLI::Range(1, kMaxLieClass))
      ->capture_default_str();
  app.add_option("--budget", g.budget, "Brute-force step budget (default: GQ3_BUDGET or 10^6)")
      ->check(CLI::PositiveNumber);

  std::string file, file2, cd_path, field, map;
  std::vector<std::string> images;
  std::optional<int> cd;
  bool torsion_free = false;
  int kq = 2, rmax = kMaxDegree;
  MilnorOptions mopts;

  auto* truncate = app.add_subcommand("truncate", "Order, invariants and relator images of G^[3]");
  truncate->add_option("FILE", file, "Presentation file")->required();

  auto* cohomology = app.add_subcommand("cohomology", "Cup products and Bocksteins in degrees 1 and 2");
  cohomology->add_option("FILE", file, "Presentation file")->required();

  auto* reconstruct = app.add_subcommand("reconstruct", "Rebuild G^[3] from cohomology data");
  reconstruct->add_option("FILE", file, "Presentation file");
  reconstruct->add_option("--cd", cd_path, "Cohomology data JSON");

  auto* equiv = app.add_subcommand("equiv", "Independence of relator images in the central layer");
  equiv->add_option("FILE", file, "Presentation file")->required();

  auto* morphism = app.add_subcommand("morphism", "Compare isomorphism on G^[3] with the cohomological condition");
  morphism->add_option("FILE1", file, "Source presentation")->required();
  morphism->add_option("FILE2", file2, "Target presentation")->required();
  morphism->add_option("--image", images, "Image of each source generator, in order, as a target word")->required();

  auto* screen = app.add_subcommand("screen", "Tests ruling out maximal pro-p Galois groups");
  screen->add_option("FILE", file, "Presentation file")->required();
  screen->add_option("--cd", cd, "Known cohomological dimension")->check(CLI::PositiveNumber);
  screen->add_flag("--torsion-free", torsion_free, "The group is known to be torsion-free");

  auto* kmilnor = app.add_subcommand("kmilnor", "Mod-q Milnor K-ring of a field preset");
  kmilnor->add_option("--field", field, "finite:L, tame_local:L or two_adic")->required();
  kmilnor->add_option("--q", kq, "Modulus")->required();
  kmilnor->add_option("--rmax", rmax, "Top degree")->check(CLI::Range(1, kMaxDegree))->capture_default_str();
  kmilnor->add_option("--window", mopts.window, "t-valuation window")->check(CLI::Range(1, 16))->capture_default_str();
  kmilnor->add_option("--precision", mopts.two_adic_precision, "2-adic search precision")
      ->check(CLI::Range(3, 16))
      ->capture_default_str();

  auto* galois = app.add_subcommand("galois-check", "Compare a field preset with a presentation's cohomology");
  galois->add_option("--field", field, "finite:L, tame_local:L or two_adic")->required();
  galois->add_option("FILE", file, "Presentation file")->required();
  galois->add_option("--map", map, "Correspondence such as u:x2,t:x1");
  galois->add_option("--rmax", rmax, "Top degree")->check(CLI::Range(1, kMaxDegree))->capture_default_str();
  galois->add_option("--window", mopts.window, "t-valuation window")->check(CLI::Range(1, 16));
  galois->add_option("--precision", mopts.two_adic_precision, "2-adic search precision")->check(CLI::Range(3, 16));

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance corpus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }
  g.q = q_override;
  if (g.budget == 0) g.budget = default_budget();

  try {
    if (*truncate) return cmd_truncate(g, file);
    if (*cohomology) return cmd_cohomology(g, file);
    if (*reconstruct) return cmd_reconstruct(g, file, cd_path);
    if (*equiv) return cmd_equiv(g, file);
    if (*morphism) return cmd_morphism(g, file, file2, images);
    if (*screen) return cmd_screen(g, file, cd, torsion_free);
    if (*kmilnor) return cmd_kmilnor(g, field, kq, rmax, mopts);
    if (*galois) return cmd_galois(g, field, file, map, rmax, mopts);
    if (*selftest) return cmd_selftest(g);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const DimensionError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}
