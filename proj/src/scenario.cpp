#include "dplab/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "dplab/ccp.hpp"
#include "dplab/errors.hpp"
#include "dplab/modular.hpp"
#include "dplab/report.hpp"
#include "dplab/search.hpp"
#include "dplab/verify.hpp"

namespace dplab {

namespace {

namespace fs = std::filesystem;

struct Emitter {
  fs::path dir;
  std::ostringstream summary;

  void csv(const std::string& name, const CsvTable& table) {
    write_text_file((dir / name).string(), table.to_string());
  }
  void text(const std::string& name, const std::string& content) {
    write_text_file((dir / name).string(), content);
  }
  void finish() { write_text_file((dir / "summary.txt").string(), summary.str()); }
};

int scenario_validate(const RunConfig& cfg, Lab& lab, Emitter& em) {
  const ValidationReport rep = validate_hypotheses(lab.problem.fields);
  em.csv("validation.csv", validation_to_csv(rep));
  em.csv("fields.csv", fields_to_csv(lab.problem.fields));
  em.summary << "scenario=validate\nviolations=" << rep.violations.size() << "\n"
             << "lipschitz_slope_p=" << format_number(rep.lipschitz_slope_p) << "\n"
             << "lipschitz_slope_q=" << format_number(rep.lipschitz_slope_q) << "\n"
             << "lipschitz_slope_a=" << format_number(rep.lipschitz_slope_a) << "\n";
  (void)cfg;
  return rep.ok() ? kExitOk : kExitConfigError;
}

int scenario_ledger(const RunConfig& cfg, Lab& lab, Emitter& em) {
  const ParameterLedger led = build_ledger(lab.problem, cfg.ledger);
  em.text("ledger.json", ledger_to_json(led));
  em.csv("ledger.csv", ledger_to_csv(led));
  em.summary << "scenario=ledger\nentries=" << led.entries().size() << "\n";
  if (led.has_cc)
    em.summary << "lambda_star=" << format_number(led.lambda_star) << "\n";
  if (led.has_sl) {
    const double rmax = cfg.r_list.empty() ? 4.0 : cfg.r_list.back();
    em.summary << "theta1=" << format_number(led.theta1(rmax)) << "\n";
  }
  return kExitOk;
}

int scenario_solve_cc(const RunConfig& cfg, Lab& lab, Emitter& em) {
  if (lab.problem.reaction.family != ReactionSpec::Family::ConcaveConvex)
    throw config_error("solve-cc needs a concave_convex reaction");
  const ParameterLedger led = build_ledger(lab.problem, cfg.ledger);
  const double lambda = cfg.lambda > 0.0 ? cfg.lambda : 0.5 * led.lambda_star;
  const SolverReport rep = solve_concave_convex(lab.problem, led, lambda, cfg.solver, cfg.seed);

  em.csv("trace.csv", trace_to_csv(rep));
  em.csv("solution.csv", gridfunction_to_csv(lab.mesh, rep.final_u));
  em.text("ledger.json", ledger_to_json(led));
  em.summary << "scenario=solve-cc\nlambda=" << format_number(lambda) << "\n"
             << "iterations=" << rep.iters << "\n"
             << "energy=" << format_number(rep.final_energy) << "\n"
             << "grad_norm=" << format_number(rep.final_grad_norm) << "\n"
             << "a_integral=" << format_number(rep.final_a_integral) << "\n"
             << "t1_pow=" << format_number(std::pow(led.t1(lambda), led.p_minus)) << "\n"
             << "norm_u=" << format_number(x_norm(lab.problem.fields, rep.final_u)) << "\n"
             << "converged=" << (rep.converged ? 1 : 0) << "\n"
             << "negative_level=" << (rep.reached_negative_level ? 1 : 0) << "\n"
             << "containment_ok=" << (rep.containment_ok ? 1 : 0) << "\n"
             << "ps_level_ok=" << (rep.ps_level_ok ? 1 : 0) << "\n";
  const bool ok = rep.converged && rep.reached_negative_level && rep.containment_ok;
  return ok ? kExitOk : kExitPropertyFailure;
}

int scenario_solve_sl(const RunConfig& cfg, Lab& lab, Emitter& em) {
  if (lab.problem.reaction.family != ReactionSpec::Family::Superlinear)
    throw config_error("solve-sl needs a superlinear reaction");
  const ParameterLedger led = build_ledger(lab.problem, cfg.ledger);
  const double rmax = cfg.r_list.empty() ? 4.0 : cfg.r_list.back();
  const double theta = cfg.theta > 0.0 ? cfg.theta : 0.5 * led.theta1(rmax);
  const auto rows = sl_level_audit(lab.problem, led, theta, cfg.k_pairs, cfg.r_list,
                                   cfg.solver, cfg.seed);
  em.csv("sl_audit.csv", sl_audit_to_csv(rows));
  em.text("ledger.json", ledger_to_json(led));
  bool ok = true;
  double prev = 0.0;
  for (const auto& r : rows) {
    ok = ok && r.positive && r.below_ps && r.below_c_star && r.level > prev;
    prev = r.level;
  }
  em.summary << "scenario=solve-sl\ntheta=" << format_number(theta) << "\n"
             << "theta1=" << format_number(led.theta1(rmax)) << "\n"
             << "levels=" << rows.size() << "\naudit_ok=" << (ok ? 1 : 0) << "\n";
  return ok ? kExitOk : kExitPropertyFailure;
}

int scenario_decay(const RunConfig& cfg, Lab& lab, Emitter& em) {
  if (lab.problem.reaction.family != ReactionSpec::Family::ConcaveConvex)
    throw config_error("decay needs a concave_convex reaction");
  const ParameterLedger led = build_ledger(lab.problem, cfg.ledger);
  std::vector<double> grid;
  for (double frac : cfg.lambda_fractions) grid.push_back(frac * led.lambda_star);
  const auto rows = decay_study(lab.problem, led, grid, cfg.solver, cfg.seed);
  em.csv("decay.csv", decay_to_csv(rows));
  em.text("ledger.json", ledger_to_json(led));
  em.summary << "scenario=decay\nrows=" << rows.size() << "\n";
  if (!rows.empty())
    em.summary << "final_norm=" << format_number(rows.back().norm_u) << "\n";
  return kExitOk;
}

int scenario_ccp(const RunConfig& cfg, Lab& lab, Emitter& em) {
  const ParameterLedger led = build_ledger(lab.problem, cfg.ledger);
  const ExponentField& f = lab.problem.fields;
  double s = cfg.bubble_s;
  if (s < 0.0) {
    Index center_node = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < lab.mesh.count(); ++i) {
      double d2 = 0.0;
      for (int k = 0; k < lab.mesh.dim; ++k) {
        const double d = lab.mesh.coords(i, k) - cfg.bubble_center[k];
        d2 += d * d;
      }
      if (d2 < best) {
        best = d2;
        center_node = i;
      }
    }
    const double p0 = f.p[center_node];
    s = (f.ambient_n - p0) / p0;
  }
  const BubbleFamily fam = make_bubbles(lab.mesh, cfg.bubble_center, cfg.eps_list, s);
  const auto rows = ccp_quotient_trace(fam, f, led);
  em.csv("ccp_trace.csv", ccp_to_csv(rows));
  em.text("ledger.json", ledger_to_json(led));

  bool ok = true;
  for (const auto& r : rows) ok = ok && r.margin >= -0.05 * r.rhs;
  em.summary << "scenario=ccp\ns=" << format_number(s) << "\nrows=" << rows.size()
             << "\nmargins_ok=" << (ok ? 1 : 0) << "\n";
  return ok ? kExitOk : kExitPropertyFailure;
}

int scenario_verify(const RunConfig& cfg, Lab& lab, Emitter& em) {
  SuiteConfig sc;
  sc.seed = cfg.seed;
  sc.samples = cfg.samples;
  sc.suites = cfg.suites;
  sc.ledger = cfg.ledger;
  const SuiteReport rep = run_suite(sc, lab.problem);
  em.csv("suite.csv", suite_to_csv(rep));
  em.text("suite.json", suite_to_json(rep));
  em.summary << "scenario=verify\nproperties=" << rep.results.size() << "\n"
             << "all_pass=" << (rep.all_pass() ? 1 : 0) << "\n";
  return rep.all_pass() ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int run_scenario(const RunConfig& cfg, const std::string& output_dir) {
  try {
    Emitter em;
    em.dir = output_dir;
    fs::create_directories(em.dir);

    auto lab = build_lab(cfg);
    if (cfg.scenario != "validate") {
      const ValidationReport rep = validate_hypotheses(lab->problem.fields);
      if (!rep.ok()) {
        Emitter fail;
        fail.dir = em.dir;
        fail.csv("validation.csv", validation_to_csv(rep));
        fail.summary << "scenario=" << cfg.scenario << "\nvalidation_failed=1\n";
        fail.finish();
        std::cerr << "hypothesis validation failed: " << rep.violations[0].condition
                  << "\n";
        return kExitConfigError;
      }
    }

    int code = 0;
    if (cfg.scenario == "validate") code = scenario_validate(cfg, *lab, em);
    else if (cfg.scenario == "ledger") code = scenario_ledger(cfg, *lab, em);
    else if (cfg.scenario == "solve-cc") code = scenario_solve_cc(cfg, *lab, em);
    else if (cfg.scenario == "solve-sl") code = scenario_solve_sl(cfg, *lab, em);
    else if (cfg.scenario == "decay") code = scenario_decay(cfg, *lab, em);
    else if (cfg.scenario == "ccp") code = scenario_ccp(cfg, *lab, em);
    else if (cfg.scenario == "verify") code = scenario_verify(cfg, *lab, em);
    else throw config_error("unknown scenario '" + cfg.scenario + "'");
    em.summary << "exit=" << code << "\n";
    em.finish();
    return code;
  } catch (const config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const verification_error& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitPropertyFailure;
  } catch (const error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumericError;
  }
}

}  // namespace dplab
