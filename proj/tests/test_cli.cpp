#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "dplab/config.hpp"
#include "dplab/errors.hpp"
#include "dplab/ledger.hpp"
#include "dplab/report.hpp"
#include "dplab/scenario.hpp"
#include "dplab/verify.hpp"
#include "helpers.hpp"

using namespace dplab;
namespace fs = std::filesystem;

namespace {

const std::string kReference =
    "[mesh]\nbox_min = 0\nbox_max = 1\nnodes = 65\nambient_n = 4\n"
    "[fields]\np = const 2.0\nq = const 2.4\na = const 1.0\n"
    "c1 = const 1.0\nc2 = const 1.0\nr1 = pstar\n"
    "[kirchhoff]\nkind = constant\nm0 = 1.0\ntau0 = 1.0\n"
    "[reaction]\nfamily = concave_convex\nentry = power\n"
    "coef1 = 1.0\ncoef2 = 0.0\ndelta = const 1.5\n"
    "ball_center = 0.5\nball_radius = 0.25\n"
    "[scenario]\nkind = validate\nseed = 7\n";

std::string slurp(const fs::path& p) { return read_text_file(p.string()); }

std::string replaced(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("dplab_test_" + tag);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing surfaces the offending key") {
  // missing q
  const std::string broken =
      "[mesh]\nnodes = 9\n[fields]\np = const 2.0\na = const 1.0\n";
  CHECK_THROWS_WITH_AS(parse_config_text(broken),
                       "missing required key 'q' in section [fields]", config_error);
  CHECK_THROWS_AS(parse_config_text("[mesh]\nnodes = \n"), config_error);
  CHECK_THROWS_AS(parse_config_text("[fields\np = const 2\n"), config_error);
  CHECK_THROWS_AS(parse_config_text("[mesh]\nnodes = nine\n"), config_error);
}

TEST_CASE("reference configs under configs/ parse and validate") {
  for (const char* name : {"cc1d.cfg", "sl1d.cfg", "ccp2d.cfg"}) {
    const fs::path path = fs::path(SOURCE_DIR) / "configs" / name;
    const RunConfig cfg = parse_config_file(path.string());
    auto lab = build_lab(cfg);
    CHECK(validate_hypotheses(lab->problem.fields).ok());
  }
}

TEST_CASE("validate scenario: reference passes, broken hypothesis exits 2") {
  const fs::path out = temp_dir("validate");
  CHECK(run_scenario(parse_config_text(kReference), out.string()) == kExitOk);
  CHECK(fs::exists(out / "validation.csv"));
  CHECK(fs::exists(out / "summary.txt"));

  const std::string bad = replaced(kReference, "q = const 2.4", "q = const 2.6");
  const fs::path out2 = temp_dir("validate_bad");
  CHECK(run_scenario(parse_config_text(bad), out2.string()) == kExitConfigError);
  const std::string report = slurp(out2 / "validation.csv");
  CHECK(report.find("q(x)/p(x) < 1 + 1/N") != std::string::npos);
}

TEST_CASE("ledger scenario emits a versioned, round-trippable JSON ledger") {
  const std::string text = replaced(kReference, "kind = validate", "kind = ledger");
  const fs::path out = temp_dir("ledger");
  CHECK(run_scenario(parse_config_text(text), out.string()) == kExitOk);
  const std::string json = slurp(out / "ledger.json");
  CHECK(json.find("dplab-ledger-1") != std::string::npos);
  CHECK(json.find("lambda_star") != std::string::npos);
  CHECK(json.find("\"inf\"") != std::string::npos);  // lambda2 with C3 = 0
  CHECK(reserialize_ledger_json(json) == json);
}

TEST_CASE("verify scenario respects the suite selection and exit codes") {
  const std::string text = replaced(kReference, "kind = validate", "kind = verify");
  RunConfig cfg = parse_config_text(text);
  cfg.samples = 300;
  cfg.suites = {"ledger"};
  const fs::path out = temp_dir("verify");
  CHECK(run_scenario(cfg, out.string()) == kExitOk);
  const std::string suite = slurp(out / "suite.csv");
  CHECK(suite.find("ledger.k0_positive") != std::string::npos);

  cfg.suites = {"nonsense"};
  CHECK(run_scenario(cfg, temp_dir("verify_bad").string()) == kExitConfigError);
}

TEST_CASE("suite config guards") {
  auto lab = testing::cc_lab(33);
  SuiteConfig sc;
  sc.samples = 0;
  CHECK_THROWS_AS(run_suite(sc, lab->problem), config_error);
  sc.samples = 10;
  sc.suites = {"unknown"};
  CHECK_THROWS_AS(run_suite(sc, lab->problem), usage_error);
}

TEST_CASE("identical seeds reproduce byte-identical reports") {
  const std::string text = replaced(kReference, "kind = validate", "kind = verify");
  RunConfig cfg = parse_config_text(text);
  cfg.samples = 200;
  cfg.suites = {"inequalities"};
  const fs::path out1 = temp_dir("det1");
  const fs::path out2 = temp_dir("det2");
  CHECK(run_scenario(cfg, out1.string()) == kExitOk);
  CHECK(run_scenario(cfg, out2.string()) == kExitOk);
  CHECK(slurp(out1 / "suite.csv") == slurp(out2 / "suite.csv"));
  CHECK(slurp(out1 / "summary.txt") == slurp(out2 / "summary.txt"));
}

TEST_CASE("scenario writes stay inside the output directory") {
  const std::string text = replaced(kReference, "kind = validate", "kind = ledger");
  const fs::path out = temp_dir("contained");
  const fs::path probe = out.parent_path() / "dplab_probe_marker";
  fs::remove_all(probe);
  CHECK(run_scenario(parse_config_text(text), out.string()) == kExitOk);
  std::set<std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(out))
    files.insert(e.path().filename().string());
  CHECK(files == std::set<std::string>{"ledger.csv", "ledger.json", "summary.txt"});
  CHECK(!fs::exists(probe));
}

TEST_CASE("gridfunction csv round trip") {
  auto lab = testing::cc_lab(33);
  Rng rng(5);
  const Vec u = smooth_random_field(lab->mesh, rng, 1.0);
  const std::string csv = gridfunction_to_csv(lab->mesh, u).to_string();
  const Vec back = gridfunction_from_csv(lab->mesh, csv);
  for (Index i = 0; i < lab->mesh.count(); ++i) CHECK(back[i] == u[i]);
}

TEST_CASE("solve and audit scenarios run end to end at desk scale") {
  SUBCASE("solve-cc") {
    const std::string text = replaced(kReference, "kind = validate", "kind = solve-cc");
    const fs::path out = temp_dir("solvecc");
    CHECK(run_scenario(parse_config_text(text), out.string()) == kExitOk);
    CHECK(fs::exists(out / "trace.csv"));
    CHECK(fs::exists(out / "solution.csv"));
    const std::string summary = slurp(out / "summary.txt");
    CHECK(summary.find("containment_ok=1") != std::string::npos);
    CHECK(summary.find("negative_level=1") != std::string::npos);
  }
  SUBCASE("decay") {
    const std::string text = replaced(kReference, "kind = validate", "kind = decay");
    const fs::path out = temp_dir("decay");
    CHECK(run_scenario(parse_config_text(text), out.string()) == kExitOk);
    CHECK(fs::exists(out / "decay.csv"));
  }
  SUBCASE("solve-sl") {
    std::string text = replaced(kReference, "kind = validate", "kind = solve-sl");
    text = replaced(text, "family = concave_convex", "family = superlinear");
    text = replaced(text, "coef2 = 0.0", "coef2 = 1.0");
    text = replaced(text, "delta = const 1.5", "delta = const 2.7");
    const fs::path out = temp_dir("solvesl");
    CHECK(run_scenario(parse_config_text(text), out.string()) == kExitOk);
    const std::string audit = slurp(out / "sl_audit.csv");
    CHECK(audit.find("below_ps") != std::string::npos);
  }
  SUBCASE("ccp") {
    const fs::path path = fs::path(SOURCE_DIR) / "configs" / "ccp2d.cfg";
    RunConfig cfg = parse_config_file(path.string());
    cfg.nodes = {33, 33};  // smaller for the unit test
    cfg.eps_list = {0.25, 0.125};
    const fs::path out = temp_dir("ccp");
    CHECK(run_scenario(cfg, out.string()) == kExitOk);
    CHECK(fs::exists(out / "ccp_trace.csv"));
  }
}

TEST_CASE("suite outcomes do not depend on the selection order") {
  auto lab = testing::cc_lab(33);
  SuiteConfig alone;
  alone.samples = 100;
  alone.suites = {"ledger"};
  alone.ledger.starts = 4;
  SuiteConfig with_others = alone;
  with_others.suites = {"inequalities", "ledger"};
  const SuiteReport a = run_suite(alone, lab->problem);
  const SuiteReport b = run_suite(with_others, lab->problem);
  for (const auto& ra : a.results) {
    bool found = false;
    for (const auto& rb : b.results)
      if (rb.id == ra.id) {
        found = true;
        CHECK(rb.pass == ra.pass);
        CHECK(rb.worst_margin == ra.worst_margin);
      }
    CHECK(found);
  }
}

TEST_CASE("superlinear verify scenario passes its property suites") {
  const std::string text =
      "[mesh]\nbox_min = 0\nbox_max = 1\nnodes = 65\nambient_n = 4\n"
      "[fields]\np = const 2.0\nq = const 2.4\na = const 1.0\n"
      "c1 = const 1.0\nc2 = const 1.0\nr1 = pstar\n"
      "[reaction]\nfamily = superlinear\nentry = power\n"
      "coef1 = 1.0\ncoef2 = 1.0\ndelta = const 2.7\n"
      "ball_center = 0.5\nball_radius = 0.25\n"
      "[scenario]\nkind = verify\nseed = 13\nsamples = 200\n"
      "suites = inequalities gradients ledger solver\n"
      "[ledger]\nstarts = 6\n";
  const fs::path out = temp_dir("verify_sl");
  CHECK(run_scenario(parse_config_text(text), out.string()) == kExitOk);
  const std::string suite = slurp(out / "suite.csv");
  CHECK(suite.find("ledger.ps_sl_decreasing") != std::string::npos);
  CHECK(suite.find("solver.audit_deterministic") != std::string::npos);
}

TEST_CASE("subcritical pair needs the critical flag lowered") {
  const std::string base =
      "[mesh]\nbox_min = 0\nbox_max = 1\nnodes = 33\nambient_n = 4\n"
      "[fields]\np = const 2.0\nq = const 2.4\na = const 1.0\n"
      "c1 = const 1.0\nc2 = const 1.0\nr1 = pstar_minus 0.5\nFLAG"
      "[reaction]\nfamily = concave_convex\nentry = power\n"
      "coef1 = 1.0\ncoef2 = 0.0\ndelta = const 1.5\n"
      "ball_center = 0.5\nball_radius = 0.25\n";

  // flagged critical: the empty critical set is reported as a violation
  auto flagged = build_lab(parse_config_text(replaced(base, "FLAG", "")));
  const ValidationReport bad = validate_hypotheses(flagged->problem.fields);
  bool found = false;
  for (const auto& v : bad.violations) found = found || v.condition == "critical set nonempty";
  CHECK(found);

  // declared subcritical: everything validates and the ledger still builds
  auto lab = build_lab(parse_config_text(replaced(base, "FLAG", "critical = false\n")));
  CHECK(validate_hypotheses(lab->problem.fields).ok());
  CHECK(lab->problem.fields.critical_set.empty());
  LedgerOptions opts;
  opts.starts = 4;
  const ParameterLedger led = build_ledger(lab->problem, opts);
  CHECK(led.lambda_star > 0.0);
  // r2 tracks the constructed identity also away from the critical pair
  for (Index i = 0; i < lab->mesh.count(); ++i)
    CHECK(lab->problem.fields.r2[i] ==
          lab->problem.fields.q_star[i] - lab->problem.fields.p_star[i] +
              lab->problem.fields.r1[i]);
}
