// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "dplab/ccp.hpp"
#include "dplab/config.hpp"
#include "dplab/errors.hpp"
#include "dplab/ledger.hpp"
#include "dplab/modular.hpp"
#include "dplab/report.hpp"
#include "dplab/scenario.hpp"
#include "dplab/search.hpp"
#include "dplab/verify.hpp"

using namespace dplab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int id, const std::string& name, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

RunConfig reference_config(const std::string& name) {
  return parse_config_file((fs::path(SOURCE_DIR) / "configs" / name).string());
}

std::unique_ptr<Lab> small_cc_lab() {
  RunConfig cfg = reference_config("cc1d.cfg");
  cfg.nodes = {65, 1};
  return build_lab(cfg);
}

bool batch_property(const SuiteReport& rep, const std::string& id, std::string& detail) {
  for (const auto& r : rep.results) {
    if (r.id != id) continue;
    if (!r.pass)
      detail += id + " margin " + format_number(r.worst_margin) + "; ";
    return r.pass;
  }
  detail += id + " missing; ";
  return false;
}

}  // namespace

int main() {
  const fs::path tmp = fs::temp_directory_path() / "dplab_acceptance";
  fs::remove_all(tmp);

  // 1. Luxemburg-norm closed-form oracles
  criterion(1, "luxemburg norm matches the constant-exponent closed forms", [](std::string& detail) {
    auto lab = small_cc_lab();
    const DomainMesh& mesh = lab->mesh;
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double p = rng.uniform(1.3, 4.5);
      const ModularSpec spec =
          two_term_spec(mesh, Vec::Ones(mesh.count()), Vec::Constant(mesh.count(), p),
                        Vec::Zero(mesh.count()), Vec::Constant(mesh.count(), p + 1.0));
      const Vec u =
          zero_trace(mesh, smooth_random_field(mesh, rng,
                                               std::pow(10.0, rng.uniform(-2.0, 2.0))))
              .values;
      const double closed = std::pow(modular(spec, u), 1.0 / p);
      if (closed == 0.0) continue;
      worst = std::max(worst, std::abs(luxemburg_norm(spec, u) - closed) / closed);
    }
    const ModularSpec two = two_term_spec(
        mesh, Vec::Ones(mesh.count()), Vec::Constant(mesh.count(), 2.0),
        Vec::Ones(mesh.count()), Vec::Constant(mesh.count(), 4.0));
    const double factor = std::sqrt(0.5 * (1.0 + std::sqrt(5.0)));  // 1.27201965
    for (int i = 0; i < 200; ++i) {
      const double c = std::pow(10.0, rng.uniform(-3.0, 3.0));
      const double norm = luxemburg_norm(two, Vec::Constant(mesh.count(), c));
      worst = std::max(worst, std::abs(norm - factor * c) / (factor * c));
    }
    detail = "worst relative error " + format_number(worst);
    return worst <= 1e-9;
  });

  // 2. Inequality suites at 1e4 samples each
  criterion(2, "inequality batches hold within 1e-12 slack", [](std::string& detail) {
    auto lab = small_cc_lab();
    SuiteConfig sc;
    sc.seed = 42;
    sc.samples = 10000;
    sc.suites = {"inequalities"};
    const SuiteReport rep = run_suite(sc, lab->problem);
    bool ok = true;
    for (const char* id :
         {"inequalities.young", "inequalities.holder", "inequalities.norm_modular",
          "inequalities.kirchhoff", "inequalities.poincare"})
      ok = batch_property(rep, id, detail) && ok;
    return ok;
  });

  // 3. Gradient consistency of the three functionals
  criterion(3, "assembled gradients match central differences at 1e-5", [](std::string& detail) {
    auto lab = small_cc_lab();
    SuiteConfig sc;
    sc.seed = 42;
    sc.samples = 20;
    sc.suites = {"gradients"};
    sc.ledger.starts = 8;
    const SuiteReport rep = run_suite(sc, lab->problem);
    bool ok = true;
    for (const char* id :
         {"gradients.phi_lambda", "gradients.t_lambda", "gradients.psi_theta"})
      ok = batch_property(rep, id, detail) && ok;
    return ok;
  });

  // 4. Ledger closed forms on the CC-1D reference configuration
  criterion(4, "ledger closed forms, residuals, sign pattern, positivity", [](std::string& detail) {
    auto lab = build_lab(reference_config("cc1d.cfg"));
    LedgerOptions opts;
    const ParameterLedger led = build_ledger(lab->problem, opts);
    bool ok = led.k0 > 0.0 && led.lambda_star > 0.0;

    double grid_max = 0.0;
    for (int i = 1; i <= 1000000; ++i) {
      const double t = 10.0 * i / 1000000;
      grid_max = std::max(grid_max, led.h_of(t));
    }
    ok = ok && std::abs(led.lambda3 - grid_max) / grid_max <= 1e-6;
    ok = ok && std::abs(led.h_of(led.t_star) - led.lambda3) <= 1e-9;

    for (int j = 1; j <= 10; ++j) {
      const double lam = led.lambda3 * j / 11.0;
      const auto [t1, t2] = led.roots_g_lambda(lam);
      ok = ok && std::abs(led.g_lambda(t1, lam)) <= 1e-9;
      ok = ok && std::abs(led.g_lambda(t2, lam)) <= 1e-9;
      ok = ok && t1 < led.t_star && led.t_star < t2;
      // five probes of the sign pattern
      ok = ok && led.g_lambda(0.5 * t1, lam) < 0.0;
      ok = ok && led.g_lambda(std::sqrt(t1 * t2), lam) > 0.0;
      ok = ok && led.g_lambda(0.5 * (t1 + t2), lam) > 0.0;
      ok = ok && led.g_lambda(std::sqrt(t1 * led.t_star), lam) > 0.0;
      ok = ok && led.g_lambda(2.0 * t2, lam) < 0.0;
    }
    detail = "lambda_star = " + format_number(led.lambda_star) +
             ", K0 = " + format_number(led.k0);
    return ok;
  });

  // 5. Truncation regime identities
  criterion(5, "truncation regimes act exactly on 100 random fields", [](std::string& detail) {
    auto lab = build_lab(reference_config("cc1d.cfg"));
    LedgerOptions opts;
    opts.starts = 8;
    const ParameterLedger led = build_ledger(lab->problem, opts);
    const Problem& prob = lab->problem;
    const double lambda = 0.5 * led.lambda_star;
    const double t1_pow = std::pow(led.t1(lambda), led.p_minus);

    Rng rng(55);
    int checked = 0;
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
      Vec u = zero_trace(lab->mesh, smooth_random_field(lab->mesh, rng, 1.0)).values;
      if (a_integral(prob, u) == 0.0) continue;
      const double target =
          (trial % 3 == 0 ? 0.5 : (trial % 3 == 1 ? 1.5 : 4.0)) * t1_pow;
      double lo = 0.0, hi = 1.0;
      while (a_integral(prob, Vec(hi * u)) < target) hi *= 2.0;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (a_integral(prob, Vec(mid * u)) < target ? lo : hi) = mid;
      }
      u *= 0.5 * (lo + hi);
      const double j = a_integral(prob, u);
      const double tv = energy_T_lambda(prob, u, lambda, t1_pow);
      const double pv = energy_phi_lambda(prob, u, lambda);
      ok = ok && tv >= pv - 1e-12 * (1.0 + std::abs(pv));
      if (j < t1_pow) ok = ok && std::abs(tv - pv) <= 1e-12 * (1.0 + std::abs(pv));
      if (j > 2.0 * t1_pow) {
        const double m = prob.kirchhoff.M0_hat(j);
        ok = ok && std::abs(tv - m) <= 1e-12 * (1.0 + std::abs(m));
      }
      ++checked;
    }
    detail = std::to_string(checked) + " fields across the three regimes";
    return ok && checked >= 95;
  });

  // 6. Concave-convex solve on CC-1D at lambda_star/2
  criterion(6, "CC-1D descent: negative level, tolerance, containment", [](std::string& detail) {
    const RunConfig cfg = reference_config("cc1d.cfg");
    auto lab = build_lab(cfg);
    const ParameterLedger led = build_ledger(lab->problem, cfg.ledger);
    const double lambda = 0.5 * led.lambda_star;
    const SolverReport rep =
        solve_concave_convex(lab->problem, led, lambda, cfg.solver, cfg.seed);
    detail = "iters " + std::to_string(rep.iters) + ", energy " +
             format_number(rep.final_energy) + ", |g| " +
             format_number(rep.final_grad_norm);
    return rep.reached_negative_level && rep.converged &&
           rep.final_grad_norm <= 1e-6 && rep.iters <= 5000 && rep.containment_ok;
  });

  // 7. Decay trend on the halving lambda grid
  criterion(7, "decay study: norms strictly decreasing, final below 1e-2", [](std::string& detail) {
    const RunConfig cfg = reference_config("cc1d.cfg");
    auto lab = build_lab(cfg);
    const ParameterLedger led = build_ledger(lab->problem, cfg.ledger);
    std::vector<double> grid;
    for (double f : {0.5, 0.25, 0.125, 0.0625}) grid.push_back(f * led.lambda_star);
    const auto rows = decay_study(lab->problem, led, grid, cfg.solver, cfg.seed);
    bool ok = rows.size() == 4;
    for (const auto& r : rows)
      ok = ok && !r.gap && r.containment_ok && r.a_integral < r.t1_pow;
    for (std::size_t i = 1; i < rows.size(); ++i) ok = ok && rows[i].norm_u < rows[i - 1].norm_u;
    ok = ok && rows.back().norm_u < 1e-2;
    if (!rows.empty()) detail = "final norm " + format_number(rows.back().norm_u);
    return ok;
  });

  // 8. Superlinear audit on SL-1D at theta1/2
  criterion(8, "SL-1D levels: positive, increasing, below both bounds", [](std::string& detail) {
    const RunConfig cfg = reference_config("sl1d.cfg");
    auto lab = build_lab(cfg);
    const ParameterLedger led = build_ledger(lab->problem, cfg.ledger);
    const double rmax = cfg.r_list.back();
    const double theta = 0.5 * led.theta1(rmax);
    const auto rows =
        sl_level_audit(lab->problem, led, theta, 3, cfg.r_list, cfg.solver, cfg.seed);
    bool ok = rows.size() == 3;
    double prev = 0.0;
    for (const auto& r : rows) {
      ok = ok && r.positive && r.below_ps && r.below_c_star && r.level > prev;
      prev = r.level;
    }
    detail = "theta = " + format_number(theta);
    return ok;
  });

  // 9. Concentration trace on CCP-2D
  criterion(9, "CCP-2D margins and gradient-mass stability", [](std::string& detail) {
    const RunConfig cfg = reference_config("ccp2d.cfg");
    auto lab = build_lab(cfg);
    const ParameterLedger led = build_ledger(lab->problem, cfg.ledger);
    const double p0 = 1.5;
    const double s = (2.0 - p0) / p0;
    const BubbleFamily fam =
        make_bubbles(lab->mesh, cfg.bubble_center, cfg.eps_list, s);
    const auto rows = ccp_quotient_trace(fam, lab->problem.fields, led);
    bool ok = rows.size() == 3;
    for (const auto& r : rows) ok = ok && r.margin >= -0.05 * r.rhs;
    const double drift =
        std::abs(rows[2].mu_mass - rows[1].mu_mass) / rows[1].mu_mass;
    ok = ok && drift <= 0.10;
    detail = "mu drift " + format_number(drift);
    return ok;
  });

  // 10. Byte-identical reruns of every scenario
  criterion(10, "every scenario reruns byte-identically", [&tmp](std::string& detail) {
    const std::string base =
        "[mesh]\nbox_min = 0\nbox_max = 1\nnodes = 65\nambient_n = 4\n"
        "[fields]\np = const 2.0\nq = const 2.4\na = const 1.0\n"
        "c1 = const 1.0\nc2 = const 1.0\nr1 = pstar\n"
        "[kirchhoff]\nkind = constant\nm0 = 1.0\ntau0 = 1.0\n"
        "[reaction]\nfamily = concave_convex\nentry = power\n"
        "coef1 = 1.0\ncoef2 = 0.0\ndelta = const 1.5\n"
        "ball_center = 0.5\nball_radius = 0.25\n"
        "[scenario]\nkind = KIND\nseed = 7\nsamples = 300\n"
        "suites = inequalities ledger\n"
        "[solver]\nprecondition = laplacian\n"
        "[ledger]\nstarts = 6\n";
    const std::string sl_base =
        "[mesh]\nbox_min = 0\nbox_max = 1\nnodes = 65\nambient_n = 4\n"
        "[fields]\np = const 2.0\nq = const 2.4\na = const 1.0\n"
        "c1 = const 1.0\nc2 = const 1.0\nr1 = pstar\n"
        "[reaction]\nfamily = superlinear\nentry = power\n"
        "coef1 = 1.0\ncoef2 = 1.0\ndelta = const 2.7\n"
        "ball_center = 0.5\nball_radius = 0.25\n"
        "[scenario]\nkind = solve-sl\nseed = 7\n"
        "[solver]\nprecondition = laplacian\n[ledger]\nstarts = 6\n";

    bool all_ok = true;
    int scenario_no = 0;
    for (const char* kind :
         {"validate", "ledger", "solve-cc", "solve-sl", "decay", "ccp", "verify"}) {
      RunConfig cfg;
      if (std::string(kind) == "solve-sl") {
        cfg = parse_config_text(sl_base);
      } else if (std::string(kind) == "ccp") {
        cfg = reference_config("ccp2d.cfg");
        cfg.nodes = {33, 33};
        cfg.eps_list = {0.25, 0.125};
        cfg.ledger.starts = 6;
      } else {
        std::string text = base;
        text.replace(text.find("KIND"), 4, kind);
        cfg = parse_config_text(text);
      }
      const fs::path d1 = tmp / (std::to_string(scenario_no) + "_a");
      const fs::path d2 = tmp / (std::to_string(scenario_no) + "_b");
      ++scenario_no;
      const int c1 = run_scenario(cfg, d1.string());
      const int c2 = run_scenario(cfg, d2.string());
      bool same = c1 == c2;
      std::set<fs::path> names;
      for (const auto& e : fs::directory_iterator(d1)) names.insert(e.path().filename());
      std::set<fs::path> names2;
      for (const auto& e : fs::directory_iterator(d2)) names2.insert(e.path().filename());
      same = same && names == names2;
      for (const auto& n : names)
        same = same && read_text_file((d1 / n).string()) == read_text_file((d2 / n).string());
      if (!same) detail += std::string(kind) + " differs; ";
      all_ok = all_ok && same;
    }
    return all_ok;
  });

  fs::remove_all(tmp);
  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
