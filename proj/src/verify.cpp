#include "dplab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "dplab/ccp.hpp"
#include "dplab/errors.hpp"
#include "dplab/modular.hpp"
#include "dplab/rng.hpp"
#include "dplab/search.hpp"

namespace dplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_gap(double lhs, double rhs) {  // normalized (rhs - lhs)
  return (rhs - lhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

struct Collector {
  const SuiteConfig* cfg;
  SuiteReport* rep;
  void add(const std::string& id, double worst_margin, const std::string& detail = "") {
    rep->results.push_back({id, worst_margin >= -cfg->slack, worst_margin, detail});
  }
  void add_flag(const std::string& id, bool pass, const std::string& detail = "") {
    rep->results.push_back({id, pass, pass ? 0.0 : -1.0, detail});
  }
};

Vec random_field(const Problem& prob, Rng& rng, double amp_lo, double amp_hi) {
  const double amp = std::pow(10.0, rng.uniform(amp_lo, amp_hi));
  return smooth_random_field(*prob.mesh, rng, amp);
}

// ---------------------------------------------------------------- inequalities

void suite_inequalities(const SuiteConfig& cfg, const Problem& prob, Collector& out) {
  const DomainMesh& mesh = *prob.mesh;
  const ExponentField& f = prob.fields;
  const int n = cfg.samples;

  {  // Young, both majorants
    Rng rng(Rng::mix(cfg.seed, 1));
    double worst = kInf;
    for (int i = 0; i < n; ++i) {
      const double a = std::pow(10.0, rng.uniform(-3.0, 1.0));
      const double b = std::pow(10.0, rng.uniform(-3.0, 1.0));
      const double eps = std::pow(10.0, rng.uniform(-2.0, 0.7));
      const double m = 1.0 + std::pow(10.0, rng.uniform(-1.0, 0.7));
      const YoungTriple t = young_check(a, b, eps, m);
      worst = std::min({worst, rel_gap(t.lhs, t.mid), rel_gap(t.mid, t.rhs)});
    }
    out.add("inequalities.young", worst);
  }

  {  // Hoelder pairing, two-norm bound with constant 2
    Rng rng(Rng::mix(cfg.seed, 2));
    double worst = kInf;
    for (int i = 0; i < n; ++i) {
      const Vec u = random_field(prob, rng, -2.0, 1.0);
      const Vec v = random_field(prob, rng, -2.0, 1.0);
      const double m0 = rng.uniform(1.4, 4.0);
      const double m1 = rng.uniform(-0.3, 0.3);  // keeps m > 1.1 on the box
      Vec m(mesh.count());
      for (Index j = 0; j < mesh.count(); ++j)
        m[j] = m0 + m1 * (mesh.coords(j, 0) - mesh.lo[0]) / (mesh.hi[0] - mesh.lo[0]);
      const Vec w = Vec::Constant(mesh.count(), rng.uniform(0.25, 4.0));
      const HolderPair pair = holder_pairing(mesh, u, v, m, w);
      worst = std::min(worst, rel_gap(pair.lhs, pair.rhs));
    }
    out.add("inequalities.holder", worst);
  }

  {  // norm-modular sandwiches, all branches, both integrand kinds
    Rng rng(Rng::mix(cfg.seed, 3));
    const ModularSpec hs = h_spec(f);
    const Vec m_expo = f.alpha.size() ? f.alpha : f.q;
    const ModularSpec ss = single_spec(mesh, m_expo);
    double worst = kInf;
    for (int i = 0; i < n; ++i) {
      Vec u = random_field(prob, rng, -2.0, 2.0);
      ModularSpec weighted;
      const ModularSpec* spec = (i % 2 == 0) ? &hs : &ss;
      if (i % 4 == 3) {  // weighted measure branch
        Vec w(mesh.count());
        for (Index j = 0; j < mesh.count(); ++j) w[j] = 0.25 + rng.uniform();
        weighted = single_spec(mesh, m_expo, w);
        spec = &weighted;
      }
      if (i % 10 == 0) {  // pin the unit-sphere branch
        const double nrm = luxemburg_norm(*spec, u);
        if (nrm > 0.0) u /= nrm;
      }
      worst = std::min(worst, check_norm_modular(*spec, u).worst_margin());
    }
    out.add("inequalities.norm_modular", worst);
  }

  {  // truncation bounds of the nonlocal coefficient
    Rng rng(Rng::mix(cfg.seed, 4));
    const KirchhoffSpec& k = prob.kirchhoff;
    double worst = kInf;
    for (int i = 0; i < n; ++i) {
      const Vec u = zero_trace(mesh, random_field(prob, rng, -2.0, 1.0)).values;
      const double t = a_integral(prob, u);
      const double s = std::max(1.0, t);
      worst = std::min({worst, (k.M0(t) - k.m0) / s, (k.m_t0 - k.M0(t)) / s,
                        (k.M0_hat(t) - k.m0 * t) / s, (k.m_t0 * t - k.M0_hat(t)) / s});
    }
    out.add("inequalities.kirchhoff", worst);
  }

  {  // Poincare quotient positivity on the zero-trace space
    Rng rng(Rng::mix(cfg.seed, 5));
    const ModularSpec hs = h_spec(f);
    double min_grad = kInf, max_quot = 0.0;
    for (int i = 0; i < n; ++i) {
      const Vec u = zero_trace(mesh, random_field(prob, rng, -2.0, 1.0)).values;
      if (u.cwiseAbs().maxCoeff() == 0.0) continue;
      const double gn = luxemburg_norm(hs, gradient_magnitude(mesh, u));
      const double un = luxemburg_norm(hs, u);
      min_grad = std::min(min_grad, gn);
      if (gn > 0.0) max_quot = std::max(max_quot, un / gn);
    }
    out.add("inequalities.poincare", min_grad,
            "max ||u||_H / ||grad u||_H = " + std::to_string(max_quot));
  }

  {  // critical-embedding quotient stays finite and positive
    Rng rng(Rng::mix(cfg.seed, 6));
    const ModularSpec gs = gstar_spec(f);
    double max_quot = 0.0, worst = kInf;
    for (int i = 0; i < std::min(n, 200); ++i) {
      const Vec u = zero_trace(mesh, random_field(prob, rng, -1.0, 1.0)).values;
      const double xn = x_norm(f, u);
      if (!(xn > 0.0)) continue;
      const double gn = luxemburg_norm(gs, u);
      max_quot = std::max(max_quot, gn / xn);
      worst = std::min(worst, gn >= 0.0 ? 0.0 : -1.0);
    }
    out.add("inequalities.embedding_gstar", worst,
            "max ||u||_G* / ||u|| = " + std::to_string(max_quot));
  }

  {  // gauge-norm algebra: homogeneity, triangle, monotonicity, reduction
    Rng rng(Rng::mix(cfg.seed, 7));
    const ModularSpec hs = h_spec(f);
    double worst_h = kInf, worst_t = kInf, worst_m = kInf;
    for (int i = 0; i < 100; ++i) {
      const Vec u = random_field(prob, rng, -1.0, 1.0);
      const Vec v = random_field(prob, rng, -1.0, 1.0);
      const double c = std::pow(10.0, rng.uniform(-2.0, 2.0)) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      const double nu = luxemburg_norm(hs, u);
      const double nv = luxemburg_norm(hs, v);
      if (nu > 0.0)
        worst_h = std::min(worst_h,
                           1e-9 - std::abs(luxemburg_norm(hs, c * u) - std::abs(c) * nu) /
                                      (std::abs(c) * nu));
      worst_t = std::min(worst_t, rel_gap(luxemburg_norm(hs, u + v), nu + nv + 1e-9));
      Vec dom(mesh.count());
      for (Index j = 0; j < mesh.count(); ++j)
        dom[j] = u[j] + std::copysign(0.3 * std::abs(v[j]), u[j] == 0.0 ? 1.0 : u[j]);
      worst_m = std::min({worst_m, rel_gap(modular(hs, u), modular(hs, dom)),
                          luxemburg_norm(hs, dom) + 1e-12 - nu});
    }
    out.add("inequalities.homogeneity", worst_h);
    out.add("inequalities.triangle", worst_t);
    out.add("inequalities.monotone", worst_m);

    // constant-exponent reduction and vanishing-modular continuity
    const Vec pc = Vec::Constant(mesh.count(), 2.5);
    const ModularSpec cs = two_term_spec(mesh, Vec::Ones(mesh.count()), pc,
                                         Vec::Zero(mesh.count()), pc.array() + 1.0);
    double worst_r = kInf, worst_v = kInf;
    for (int i = 0; i < 50; ++i) {
      const Vec u = zero_trace(mesh, random_field(prob, rng, -1.0, 1.0)).values;
      const Vec gm = gradient_magnitude(mesh, u);
      const double closed = std::pow(modular(cs, gm), 1.0 / 2.5);
      if (closed > 0.0)
        worst_r = std::min(worst_r,
                           1e-9 - std::abs(luxemburg_norm(cs, gm) - closed) / closed);
      const double n0 = luxemburg_norm(hs, u);
      double prev = n0;
      for (int j = 1; j <= 12; ++j) {
        const double cur = luxemburg_norm(hs, u / std::pow(2.0, j));
        worst_v = std::min(worst_v, prev + 1e-15 - cur);
        prev = cur;
      }
      worst_v = std::min(worst_v, 1e-3 * n0 - prev);  // vanishes with the modular
    }
    out.add("inequalities.constexp_reduction", worst_r);
    out.add("inequalities.vanishing_norm", worst_v);
  }

  {  // two-term Brezis-Lieb tail on a nodewise convergent sequence
    Rng rng(Rng::mix(cfg.seed, 8));
    const ModularSpec bs = b_spec(f);
    const Vec base = zero_trace(mesh, random_field(prob, rng, -0.5, 0.5)).values;
    const Vec g = zero_trace(mesh, random_field(prob, rng, -0.5, 0.5)).values;
    std::vector<Vec> seq;
    for (int j = 0; j <= 30; ++j) seq.push_back(base + g / std::pow(2.0, j));
    const std::vector<double> dev = brezis_lieb_deviation(bs, seq, base);
    double worst = kInf;
    for (std::size_t j = 3; j < dev.size(); ++j)
      worst = std::min(worst, dev[j - 1] + 1e-15 - dev[j]);
    worst = std::min(worst, 1e-6 - dev.back());
    out.add("inequalities.brezis_lieb", worst,
            "tail deviation = " + std::to_string(dev.back()));
  }
}

// ------------------------------------------------------------------- gradients

void suite_gradients(const SuiteConfig& cfg, const Problem& prob,
                     const ParameterLedger* led, Collector& out) {
  const DomainMesh& mesh = *prob.mesh;
  const bool cc = prob.reaction.family == ReactionSpec::Family::ConcaveConvex;
  const double lambda = cc && led ? 0.5 * led->lambda_star : 0.5;
  const double theta = cc ? 1.0 : 1e-3;
  const double t1_pow =
      cc && led ? std::pow(led->t1(lambda), led->p_minus) : 0.0;

  struct Fn {
    std::string id;
    std::function<double(const Vec&)> energy;
    std::function<Vec(const Vec&)> gradient;
  };
  std::vector<Fn> fns;
  fns.push_back({"gradients.phi_lambda",
                 [&](const Vec& u) { return energy_phi_lambda(prob, u, lambda); },
                 [&](const Vec& u) { return gradient_phi_lambda(prob, u, lambda); }});
  if (cc && led)
    fns.push_back({"gradients.t_lambda",
                   [&](const Vec& u) { return energy_T_lambda(prob, u, lambda, t1_pow); },
                   [&](const Vec& u) { return gradient_T_lambda(prob, u, lambda, t1_pow); }});
  fns.push_back({"gradients.psi_theta",
                 [&](const Vec& u) { return energy_psi_theta(prob, u, theta); },
                 [&](const Vec& u) { return gradient_psi_theta(prob, u, theta); }});

  int fn_index = 0;
  for (const auto& fn : fns) {
    Rng rng(Rng::mix(cfg.seed, 20 + static_cast<std::uint64_t>(fn_index++)));
    double worst = kInf;
    for (int i = 0; i < 20; ++i) {
      const Vec u = zero_trace(mesh, random_field(prob, rng, -1.5, -0.5)).values;
      const Vec v = zero_trace(mesh, random_field(prob, rng, -1.5, -0.5)).values;
      const Vec g = fn.gradient(u);
      double pair = 0.0;
      for (Index j = 0; j < mesh.count(); ++j) pair += mesh.weights[j] * g[j] * v[j];
      const double h = 1e-5 * std::max(1.0, u.cwiseAbs().maxCoeff()) /
                       std::max(1.0, v.cwiseAbs().maxCoeff());
      const double fd = (fn.energy(u + h * v) - fn.energy(u - h * v)) / (2.0 * h);
      const double rel = std::abs(pair - fd) / (1.0 + std::abs(pair));
      worst = std::min(worst, 1e-5 - rel);
    }
    out.add(fn.id, worst);
  }

  {  // evenness under u -> -u and oddness of the assembled gradient
    Rng rng(Rng::mix(cfg.seed, 25));
    double worst_even = kInf, worst_odd = kInf;
    for (int i = 0; i < 50; ++i) {
      const Vec u = zero_trace(mesh, random_field(prob, rng, -1.0, 0.5)).values;
      const double e1 = energy_phi_lambda(prob, u, lambda);
      const double e2 = energy_phi_lambda(prob, -u, lambda);
      worst_even = std::min(worst_even, -std::abs(e1 - e2));
      const double s1 = energy_psi_theta(prob, u, theta);
      const double s2 = energy_psi_theta(prob, -u, theta);
      worst_even = std::min(worst_even, -std::abs(s1 - s2));
      const Vec g1 = gradient_phi_lambda(prob, u, lambda);
      const Vec g2 = gradient_phi_lambda(prob, -u, lambda);
      const double scale = std::max(1.0, g1.cwiseAbs().maxCoeff());
      worst_odd = std::min(worst_odd, 1e-12 - (g1 + g2).cwiseAbs().maxCoeff() / scale);
    }
    out.add("gradients.evenness", worst_even);
    out.add("gradients.gradient_odd", worst_odd);
  }
}

// ---------------------------------------------------------------------- ledger

void suite_ledger(const LedgerOptions& lopts, const Problem& prob,
                  const ParameterLedger& led, Collector& out) {
  out.add("ledger.k0_positive", led.k0);
  out.add("ledger.n_tau_ordered",
          std::min(led.n2 - led.n1, led.tau2 - led.tau1));

  {  // bitwise reproducibility of the whole pipeline
    const ParameterLedger again = build_ledger(prob, lopts);
    bool same = true;
    const auto a = led.entries(), b = again.entries();
    same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i)
      same = a[i].name == b[i].name &&
             (a[i].value == b[i].value ||
              (std::isnan(a[i].value) && std::isnan(b[i].value))) &&
             a[i].provenance == b[i].provenance;
    out.add_flag("ledger.reproducible", same);
  }

  if (led.has_cc) {
    out.add("ledger.lambda_star_positive", led.lambda_star);
    out.add("ledger.lambda_star_below_min",
            std::min(std::min(led.lambda1, led.lambda2),
                     std::min(led.lambda3, led.lambda4)) -
                led.lambda_star);

    {  // closed-form lambda3 / t* against brute grid maximization
      double grid_max = 0.0, grid_arg = 0.0;
      const int npts = 1000000;
      for (int i = 1; i <= npts; ++i) {
        const double t = 10.0 * i / npts;
        const double h = led.h_of(t);
        if (h > grid_max) {
          grid_max = h;
          grid_arg = t;
        }
      }
      const double rel = std::abs(led.lambda3 - grid_max) / grid_max;
      out.add("ledger.lambda3_gridmax", 1e-6 - rel,
              "argmax gap = " + std::to_string(std::abs(grid_arg - led.t_star)));
      out.add("ledger.h_at_tstar", 1e-10 - std::abs(led.h_of(led.t_star) - led.lambda3) /
                                                 std::max(1.0, led.lambda3));
    }

    {  // root residuals, ordering, and sign pattern on a lambda grid
      double worst_res = kInf, worst_sign = kInf, worst_mono = kInf;
      double prev_t1 = 0.0;
      for (int j = 1; j <= 10; ++j) {
        const double lam = led.lambda3 * j / 11.0;
        const auto [t1, t2] = led.roots_g_lambda(lam);
        worst_res = std::min({worst_res, 1e-9 - std::abs(led.g_lambda(t1, lam)),
                              1e-9 - std::abs(led.g_lambda(t2, lam))});
        worst_sign = std::min({worst_sign,
                               -led.g_lambda(0.5 * t1, lam),
                               led.g_lambda(std::sqrt(t1 * t2), lam),
                               led.g_lambda(0.5 * (t1 + t2), lam),
                               led.g_lambda(std::sqrt(t1 * led.t_star), lam),
                               -led.g_lambda(2.0 * t2, lam)});
        worst_mono = std::min(worst_mono, t1 - prev_t1);
        worst_sign = std::min(worst_sign, std::min(led.t_star - t1, t2 - led.t_star));
        prev_t1 = t1;
      }
      out.add("ledger.root_residuals", worst_res);
      out.add("ledger.g_sign_pattern", worst_sign);
      out.add("ledger.t1_monotone", worst_mono);
      out.add("ledger.t1_vanishes", 1e-3 - led.t1(led.lambda3 * 1e-8));
    }

    if (std::isfinite(led.lambda_star2)) {
      double worst = kInf;
      for (int j = 1; j <= 8; ++j)
        worst = std::min(worst, led.ps_level_cc(led.lambda_star2 * j / 9.0));
      out.add("ledger.ps_cc_positive_below", worst);
      out.add("ledger.ps_cc_zero_at_star2",
              1e-9 - std::abs(led.ps_level_cc(led.lambda_star2)));
    } else {
      out.add_flag("ledger.ps_cc_positive_below", led.ps_level_cc(1.0) > 0.0,
                   "K = 0 branch: threshold positive for every lambda");
    }
  }

  if (led.has_sl) {
    double worst = kInf, prev = kInf;
    for (int j = 1; j <= 12; ++j) {
      const double theta = std::pow(10.0, -6.0 + 0.5 * j);
      const double lvl = led.ps_level_sl(theta);
      worst = std::min(worst, prev - lvl);
      prev = lvl;
    }
    out.add("ledger.ps_sl_decreasing", worst);
    out.add("ledger.ps_sl_blows_up", led.ps_level_sl(1e-12));
    const double rmax = 4.0;
    const double th1 = led.theta1(rmax);
    out.add("ledger.theta1_feasible",
            std::min(th1, led.ps_level_sl(0.5 * th1) - led.c_star(rmax)));
  }
}

// ---------------------------------------------------------------------- solver

void suite_solver(const SuiteConfig& cfg, const Problem& prob,
                  const ParameterLedger& led, Collector& out) {
  const DomainMesh& mesh = *prob.mesh;
  SolverOptions opts;
  opts.precond = SolverOptions::Precond::Laplacian;
  opts.max_iters = 2000;

  if (prob.reaction.family == ReactionSpec::Family::Superlinear) {
    const double rmax = 4.0;
    const double theta = 0.5 * led.theta1(rmax);
    const auto rows1 = sl_level_audit(prob, led, theta, 2, {2.0, 3.0}, opts, cfg.seed);
    const auto rows2 = sl_level_audit(prob, led, theta, 2, {2.0, 3.0}, opts, cfg.seed);
    bool same = rows1.size() == rows2.size();
    for (std::size_t i = 0; same && i < rows1.size(); ++i)
      same = rows1[i].level == rows2[i].level &&
             rows1[i].descent_energy == rows2[i].descent_energy;
    out.add_flag("solver.audit_deterministic", same);
    return;
  }

  const double lambda = 0.5 * led.lambda_star;
  const SolverReport rep1 = solve_concave_convex(prob, led, lambda, opts, cfg.seed);
  const SolverReport rep2 = solve_concave_convex(prob, led, lambda, opts, cfg.seed);

  bool same = rep1.energy_trace.size() == rep2.energy_trace.size() &&
              rep1.final_grad_norm == rep2.final_grad_norm;
  for (std::size_t i = 0; same && i < rep1.energy_trace.size(); ++i)
    same = rep1.energy_trace[i] == rep2.energy_trace[i];
  out.add_flag("solver.deterministic", same);

  double worst_mono = kInf;
  for (std::size_t i = 1; i < rep1.energy_trace.size(); ++i)
    worst_mono = std::min(worst_mono, rep1.energy_trace[i - 1] - rep1.energy_trace[i]);
  out.add("solver.monotone_trace", worst_mono);

  double worst_bnd = 0.0;
  for (Index i = 0; i < mesh.count(); ++i)
    if (mesh.boundary[static_cast<std::size_t>(i)])
      worst_bnd = std::max(worst_bnd, std::abs(rep1.final_u[i]));
  out.add("solver.boundary_zero", -worst_bnd);

  {  // weak-form residual against random zero-trace directions
    Rng rng(Rng::mix(cfg.seed, 31));
    const double t1_pow = std::pow(led.t1(lambda), led.p_minus);
    const Vec g = gradient_T_lambda(prob, rep1.final_u, lambda, t1_pow);
    double worst = kInf;
    for (int i = 0; i < 10; ++i) {
      const Vec v = zero_trace(mesh, smooth_random_field(mesh, rng, 1.0)).values;
      double pair = 0.0, vn = 0.0;
      for (Index j = 0; j < mesh.count(); ++j) {
        pair += mesh.weights[j] * g[j] * v[j];
        vn += mesh.weights[j] * v[j] * v[j];
      }
      worst = std::min(worst, opts.grad_tol * std::sqrt(vn) - std::abs(pair));
    }
    out.add("solver.weak_residual", worst);
  }

  {  // mirrored seed gives mirrored energies (odd reaction)
    const double t1_pow = std::pow(led.t1(lambda), led.p_minus);
    Objective obj{
        [&](const Vec& u) { return energy_T_lambda(prob, u, lambda, t1_pow); },
        [&](const Vec& u) { return gradient_T_lambda(prob, u, lambda, t1_pow); }};
    const std::vector<Vec> seeds = seed_from_eigen_subspace(
        mesh, prob.fields, prob.reaction.ball_center, prob.reaction.ball_radius, 1);
    const Vec u0 = 0.25 * led.t1(lambda) * seeds[0];
    SolverOptions fast = opts;
    fast.max_iters = 200;
    const SolverReport a = descend(prob, obj, u0, fast);
    const SolverReport b = descend(prob, obj, Vec(-u0), fast);
    double worst = kInf;
    const std::size_t nsteps = std::min(a.energy_trace.size(), b.energy_trace.size());
    for (std::size_t i = 0; i < nsteps; ++i)
      worst = std::min(worst, 1e-12 - std::abs(a.energy_trace[i] - b.energy_trace[i]));
    out.add("solver.mirror_descent", worst);
  }
}

// ------------------------------------------------------------------------ ccp

void suite_ccp(const SuiteConfig&, const Problem& prob,
               const ParameterLedger& led, Collector& out) {
  const DomainMesh& mesh = *prob.mesh;
  const ExponentField& f = prob.fields;

  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double side = kInf;
  for (int k = 0; k < mesh.dim; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    center[k] = 0.5 * (mesh.lo[ks] + mesh.hi[ks]);
    side = std::min(side, mesh.hi[ks] - mesh.lo[ks]);
  }
  const double hmax = mesh.dim == 2 ? std::max(mesh.spacing[0], mesh.spacing[1])
                                    : mesh.spacing[0];
  const double eps = std::max(4.0 * hmax, 0.25 * side);
  if (eps + 1e-12 >= 0.5 * side) {
    out.add_flag("ccp.suite", false, "mesh too coarse to resolve any bubble");
    return;
  }

  {  // plateau and center-amplitude invariants
    const double s = 0.7;
    const BubbleFamily fam = make_bubbles(mesh, center, {eps}, s);
    const Vec& u = fam.fields[0];
    const double amp = std::pow(eps, -s);
    double worst = kInf;
    for (Index i = 0; i < mesh.count(); ++i) {
      double d = 0.0;
      for (int k = 0; k < mesh.dim; ++k) {
        const double dd = mesh.coords(i, k) - center[k];
        d += dd * dd;
      }
      d = std::sqrt(d) / eps;
      if (d <= 0.5 && !mesh.boundary[static_cast<std::size_t>(i)])
        worst = std::min(worst, 1e-12 - std::abs(u[i] - amp) / amp);
      if (d >= 1.0) worst = std::min(worst, -std::abs(u[i]));
    }
    out.add("ccp.plateau", worst);

    // support containment makes the ball mass exactly the global mass
    const auto rows = ccp_quotient_trace(fam, f, led);
    Vec bdens(mesh.count());
    for (Index i = 0; i < mesh.count(); ++i) {
      const double t = std::abs(u[i]);
      const double aw = f.a[i] > 0.0 ? std::pow(f.a[i], f.r2[i] / f.q[i]) : 0.0;
      bdens[i] = t == 0.0 ? 0.0
                          : f.c1[i] * std::pow(t, f.r1[i]) +
                                f.c2[i] * aw * std::pow(t, f.r2[i]);
    }
    const double global = integrate(mesh, bdens);
    out.add("ccp.localization",
            1e-12 - std::abs(global - rows[0].nu_mass) / std::max(1.0, global));
    out.add("ccp.correction_vanishes", -rows[0].correction);
  }

  {  // zero family
    BubbleFamily fam;
    fam.mesh = &mesh;
    fam.center = center;
    fam.eps = {eps};
    fam.fields = {Vec::Zero(mesh.count())};
    const auto rows = ccp_quotient_trace(fam, f, led);
    out.add("ccp.zero_family",
            std::min({-rows[0].mu_mass, -rows[0].nu_mass, -std::abs(rows[0].margin)}));
  }

  {  // translation covariance on constant-exponent data
    bool constant = true;
    for (const Vec* v : {&f.p, &f.q, &f.a, &f.c1, &f.c2, &f.r1})
      constant = constant && (v->maxCoeff() - v->minCoeff() == 0.0);
    if (constant) {
      Eigen::Vector2d shifted = center;
      shifted[0] += mesh.spacing[0];
      if (shifted[0] + eps < mesh.hi[0]) {
        const BubbleFamily fam1 = make_bubbles(mesh, center, {eps}, 0.5);
        const BubbleFamily fam2 = make_bubbles(mesh, shifted, {eps}, 0.5);
        const auto r1 = ccp_quotient_trace(fam1, f, led);
        const auto r2 = ccp_quotient_trace(fam2, f, led);
        const double scale = std::max(1.0, std::abs(r1[0].mu_mass));
        const double worst =
            std::min({1e-10 - std::abs(r1[0].mu_mass - r2[0].mu_mass) / scale,
                      1e-10 - std::abs(r1[0].nu_mass - r2[0].nu_mass) / scale,
                      1e-10 - std::abs(r1[0].margin - r2[0].margin) / scale});
        out.add("ccp.translation_covariance", worst);
      }
    } else {
      out.add_flag("ccp.translation_covariance", true, "skipped: variable exponents");
    }
  }

  {  // unresolvable bubbles are rejected
    bool raised = false;
    try {
      make_bubbles(mesh, center, {2.0 * hmax}, 0.0);
    } catch (const resource_error&) {
      raised = true;
    }
    out.add_flag("ccp.resolution_guard", raised);
  }
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& cfg, const Problem& prob) {
  if (cfg.samples < 1) throw config_error("suite sample count must be >= 1");
  if (!(cfg.slack > 0.0)) throw config_error("suite slack must be positive");
  const std::set<std::string> known{"inequalities", "gradients", "ledger", "solver", "ccp"};
  std::set<std::string> selected;
  for (const auto& s : cfg.suites) {
    if (!known.count(s)) throw usage_error("unknown suite '" + s + "'");
    selected.insert(s);
  }

  SuiteReport rep;
  Collector out{&cfg, &rep};

  const bool needs_ledger = selected.count("gradients") || selected.count("ledger") ||
                            selected.count("solver") || selected.count("ccp");
  ParameterLedger led;
  LedgerOptions lopts = cfg.ledger;  // threshold families follow the reaction
  lopts.compute_cc = prob.reaction.family == ReactionSpec::Family::ConcaveConvex;
  lopts.compute_sl = prob.reaction.family == ReactionSpec::Family::Superlinear;
  if (needs_ledger) led = build_ledger(prob, lopts);

  if (selected.count("inequalities")) suite_inequalities(cfg, prob, out);
  if (selected.count("gradients")) suite_gradients(cfg, prob, &led, out);
  if (selected.count("ledger")) suite_ledger(lopts, prob, led, out);
  if (selected.count("solver")) suite_solver(cfg, prob, led, out);
  if (selected.count("ccp")) suite_ccp(cfg, prob, led, out);
  return rep;
}

}  // namespace dplab
