#include "dplab/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dplab/errors.hpp"
#include "dplab/modular.hpp"
#include "dplab/rng.hpp"

namespace dplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec first_box_eigenfunction(const DomainMesh& mesh) {
  Vec phi(mesh.count());
  for (Index i = 0; i < mesh.count(); ++i) {
    double v = 1.0;
    for (int k = 0; k < mesh.dim; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      v *= std::sin(M_PI * (mesh.coords(i, k) - mesh.lo[ks]) /
                    (mesh.hi[ks] - mesh.lo[ks]));
    }
    phi[i] = v;
  }
  return zero_trace(mesh, phi).values;
}

// Radial bump profile used to widen the S-estimation family toward
// concentrating data: quintic plateau bump of radius eps at the box center.
Vec bump_profile(const DomainMesh& mesh, double eps) {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  for (int k = 0; k < mesh.dim; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    center[k] = 0.5 * (mesh.lo[ks] + mesh.hi[ks]);
  }
  Vec u(mesh.count());
  for (Index i = 0; i < mesh.count(); ++i) {
    double d2 = 0.0;
    for (int k = 0; k < mesh.dim; ++k) {
      const double d = mesh.coords(i, k) - center[k];
      d2 += d * d;
    }
    u[i] = smoothstep_cutoff(std::sqrt(d2) / eps, 0.5).value;
  }
  return zero_trace(mesh, u).values;
}

struct RayleighQuotient {
  const DomainMesh* mesh;
  const Vec* p;

  double numerator(const Vec& u, Vec* partials) const {
    const Mat grad = gradient(*mesh, u);
    double num = 0.0;
    Mat flux = Mat::Zero(grad.rows(), grad.cols());
    for (Index i = 0; i < grad.rows(); ++i) {
      const double mag = grad.row(i).norm();
      if (mag == 0.0) continue;
      num += mesh->weights[i] * std::pow(mag, (*p)[i]);
      flux.row(i) = ((*p)[i] * std::pow(mag, (*p)[i] - 1.0) / mag) * grad.row(i);
    }
    if (partials) *partials = divergence_adjoint(*mesh, flux);
    return num;
  }

  double denominator(const Vec& u, Vec* partials) const {
    double den = 0.0;
    if (partials) partials->setZero(mesh->count());
    for (Index i = 0; i < mesh->count(); ++i) {
      const double a = std::abs(u[i]);
      if (a == 0.0) continue;
      den += mesh->weights[i] * std::pow(a, (*p)[i]);
      if (partials)
        (*partials)[i] = mesh->weights[i] * (*p)[i] *
                         std::copysign(std::pow(a, (*p)[i] - 1.0), u[i]);
    }
    return den;
  }

  double value(const Vec& u) const {
    const double den = denominator(u, nullptr);
    if (den <= 0.0) return kInf;
    return numerator(u, nullptr) / den;
  }

  // raw partial derivatives (pairing vector) of the quotient
  Vec partials(const Vec& u, double* quotient) const {
    Vec dn, dd;
    const double num = numerator(u, &dn);
    const double den = denominator(u, &dd);
    *quotient = num / den;
    return (dn * den - num * dd) / (den * den);
  }
};

// Armijo descent of the quotient along stiffness-preconditioned directions.
// Returns the smallest quotient seen; best-so-far iterate lands in *u.
double polish_quotient(const RayleighQuotient& rq, const StiffnessSolver& stiff,
                       Vec& u, int max_iters) {
  double r = rq.value(u);
  if (!std::isfinite(r)) return kInf;
  int stall = 0;
  for (int it = 0; it < max_iters && stall < 8; ++it) {
    double rv = 0.0;
    const Vec grad_pairing = rq.partials(u, &rv);
    Vec dir = -stiff.solve_pairing(grad_pairing);
    const double slope = grad_pairing.dot(dir);
    if (!(slope < 0.0)) break;
    double step = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Vec cand = u + step * dir;
      const double rc = rq.value(cand);
      if (rc <= rv + 1e-4 * step * slope) {
        u = cand;
        if (rv - rc < 1e-13 * (1.0 + std::abs(rv))) ++stall;
        else stall = 0;
        r = std::min(r, rc);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return r;
}

}  // namespace

double estimate_kappa1(const DomainMesh& mesh, const Vec& p, std::uint64_t seed,
                       int starts, int iters, Vec* argmin) {
  RayleighQuotient rq{&mesh, &p};
  const StiffnessSolver stiff(mesh);
  Rng rng(Rng::mix(seed, 0x6b6170706131ull));

  double best = kInf;
  Vec best_u;
  auto consider = [&](Vec u) {
    if (u.cwiseAbs().maxCoeff() == 0.0) return;
    const double r = polish_quotient(rq, stiff, u, iters);
    if (r < best) {
      best = r;
      best_u = u;
    }
  };
  consider(first_box_eigenfunction(mesh));
  for (int s = 0; s < starts; ++s) consider(smooth_random_field(mesh, rng, 1.0));
  if (!std::isfinite(best))
    throw numeric_error("kappa1 estimate: every start was degenerate");
  if (argmin) *argmin = best_u;
  return best;
}

std::vector<Vec> embedding_family(const DomainMesh& mesh, std::uint64_t seed,
                                  int starts, bool with_bubbles) {
  Rng rng(Rng::mix(seed, 0x6c656467ull));
  std::vector<Vec> family;
  family.push_back(first_box_eigenfunction(mesh));
  for (int s = 0; s < starts; ++s)
    family.push_back(smooth_random_field(mesh, rng, 1.0));
  if (with_bubbles) {
    const double side = mesh.hi[0] - mesh.lo[0];
    for (double frac : {0.25, 0.125, 0.0625}) {
      const double eps = frac * side;
      if (eps >= 4.0 * mesh.spacing[0]) family.push_back(bump_profile(mesh, eps));
    }
  }
  return family;
}

double estimate_S(const ExponentField& fields, const std::vector<Vec>& family) {
  const ModularSpec spec_h = h_spec(fields);
  const ModularSpec spec_b = b_spec(fields);
  double s_raw = kInf;
  for (const Vec& u : family) {
    const double grad_norm = luxemburg_norm(spec_h, gradient_magnitude(*fields.mesh, u));
    if (!(grad_norm > 0.0)) continue;
    const double b_norm = luxemburg_norm(spec_b, u);
    if (b_norm > 0.0) s_raw = std::min(s_raw, grad_norm / b_norm);
  }
  if (!std::isfinite(s_raw))
    throw numeric_error("S estimate: every family member was degenerate");
  return s_raw;
}

double estimate_C8(const ExponentField& fields, const std::vector<Vec>& family) {
  if (fields.sigma.size() == 0)
    throw config_error("C8 estimate needs the reaction exponent sigma");
  const ModularSpec spec_h = h_spec(fields);
  const ModularSpec spec_b = b_spec(fields);
  const ModularSpec spec_sigma = single_spec(*fields.mesh, fields.sigma);
  double c8_raw = 0.0;
  for (const Vec& u : family) {
    const double grad_norm = luxemburg_norm(spec_h, gradient_magnitude(*fields.mesh, u));
    if (!(grad_norm > 0.0)) continue;
    const double sig_norm = luxemburg_norm(spec_sigma, u);
    const double b_norm = luxemburg_norm(spec_b, u);
    c8_raw = std::max(c8_raw, std::max(sig_norm, b_norm) / grad_norm);
  }
  return c8_raw;
}

double ParameterLedger::h_of(double t) const {
  return a0 * std::pow(t, q_plus - sigma_minus) -
         b0 * std::pow(t, r1_minus - sigma_minus);
}

double ParameterLedger::g_lambda(double t, double lambda) const {
  const double c2c8 = a0 > 0.0 ? m0 / (2.0 * q_plus * a0) : 0.0;  // C2 C8^{sigma^+}
  return m0 / (2.0 * q_plus) * std::pow(t, q_plus) -
         lambda * c2c8 * std::pow(t, sigma_minus) -
         c2c8 * b0 * std::pow(t, r1_minus);
}

std::pair<double, double> ParameterLedger::roots_g_lambda(double lambda) const {
  if (!has_cc) throw domain_error("roots_g_lambda: ledger has no concave-convex data");
  if (!(lambda > 0.0) || lambda >= lambda3)
    throw domain_error("g_lambda has no positive roots unless 0 < lambda < lambda3");

  auto bisect = [this, lambda](double lo, double hi, bool increasing) {
    while (hi - lo > 1e-12 * lo) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const bool below = h_of(mid) < lambda;
      if (below == increasing)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  // h increases on (0, t*), decreases on (t*, inf)
  double lo = t_star;
  int guard = 0;
  while (h_of(lo) >= lambda) {
    lo *= 0.5;
    if (++guard > 400) throw numeric_error("t1 bracket failure");
  }
  const double root1 = bisect(lo, t_star, true);

  double hi = 2.0 * t_star;
  guard = 0;
  while (h_of(hi) >= lambda) {
    hi *= 2.0;
    if (++guard > 400) throw numeric_error("t2 bracket failure");
  }
  const double root2 = bisect(t_star, hi, false);
  return {root1, root2};
}

double ParameterLedger::t1(double lambda) const { return roots_g_lambda(lambda).first; }
double ParameterLedger::t2(double lambda) const { return roots_g_lambda(lambda).second; }

double ParameterLedger::ps_level_cc(double lambda) const {
  const double base = k0 * std::min(std::pow(s_hat, n1), std::pow(s_hat, n2)) *
                      std::min(std::pow(m0, tau1), std::pow(m0, tau2));
  if (k_const == 0.0) return base;
  const double e_hi = ell_plus / (ell_plus - 1.0);
  const double e_lo = ell_minus / (ell_minus - 1.0);
  return base - k_const * std::max(std::pow(lambda, e_hi), std::pow(lambda, e_lo));
}

double ParameterLedger::ps_level_sl(double theta) const {
  const double factor = 1.0 / beta - 1.0 / r1_minus;
  return factor * std::min(std::pow(s_hat, n1), std::pow(s_hat, n2)) *
             std::min(std::pow(theta, -tau1), std::pow(theta, -tau2)) -
         e_l1 / beta;
}

double ParameterLedger::c_star(double R) const {
  if (!(R > 1.0)) throw domain_error("c_star requires R > 1");
  return std::pow(R, q_plus) / p_minus + 2.0 * c9 * std::pow(R, alpha_plus) +
         2.0 * /*C1*/ c1_growth * (volume + 1.0) + 1.0 / p_minus;
}

double ParameterLedger::c_upper_star(double R) const {
  if (!(R > 1.0)) throw domain_error("c_upper_star requires R > 1");
  return r1_minus / (2.0 * q_plus * (1.0 + std::pow(s_hat, -r2_plus))) *
         std::pow(R, p_minus - r2_plus);
}

double ParameterLedger::theta1(double R) const {
  const double cap = c_upper_star(R);
  const double target = c_star(R);
  // ps_level_sl is strictly decreasing and blows up as theta -> 0+,
  // so a feasible theta always exists below the equation's root.
  double hi = cap;
  int guard = 0;
  while (ps_level_sl(hi) <= target) {
    hi *= 0.5;
    if (++guard > 2000) throw numeric_error("theta1: no feasible theta found");
  }
  if (guard == 0) return cap;  // the cap itself already satisfies the bound
  double lo = hi, up = 2.0 * hi;
  while (up - lo > 1e-12 * lo) {
    const double mid = 0.5 * (lo + up);
    if (mid == lo || mid == up) break;
    if (ps_level_sl(mid) > target)
      lo = mid;
    else
      up = mid;
  }
  return lo;
}

std::vector<LedgerEntry> ParameterLedger::entries() const {
  std::vector<LedgerEntry> out;
  auto add = [&out](const std::string& n, double v, const std::string& prov) {
    out.push_back({n, v, prov});
  };
  add("kappa1", kappa1_hat, "empirical");
  add("S", s_hat, "empirical");
  add("C_alpha", c_alpha_hat, "empirical");
  add("K0", k0, "closed-form");
  add("n1", n1, "closed-form");
  add("n2", n2, "closed-form");
  add("tau1", tau1, "closed-form");
  add("tau2", tau2, "closed-form");
  add("m0", m0, "closed-form");
  add("M_t0", m_t0, "closed-form");
  add("t0", t0, "closed-form");
  add("C1", c1_growth, c_provenance);
  if (has_cc) {
    add("C8", c8_hat, "empirical");
    add("C2", c2_growth, c_provenance);
    add("C3", c3_growth, c_provenance);
    add("C4", c4_growth, c_provenance);
    add("C5", c5_growth, c_provenance);
    add("C6", c6_growth, c_provenance);
    add("ell_minus", ell_minus, "closed-form");
    add("ell_plus", ell_plus, "closed-form");
    add("norm_one_ell_conj", norm_one_ell_conj, "empirical");
    add("a", a_coef, "empirical");
    add("b", b_coef, "empirical");
    add("K", k_const, "empirical");
    add("a0", a0, "empirical");
    add("b0", b0, "empirical");
    add("lambda1", lambda1, "empirical");
    add("lambda2", lambda2, "empirical");
    add("lambda3", lambda3, "empirical");
    add("lambda4", lambda4, "empirical");
    add("t_star", t_star, "empirical");
    add("lambda_star1", lambda_star1, "empirical");
    add("lambda_star2", lambda_star2, "empirical");
    add("lambda_star", lambda_star, "empirical");
    for (const auto& [lam, t1v] : t1_samples)
      add("t1(" + std::to_string(lam) + ")", t1v, "empirical");
  }
  if (has_sl) {
    add("C9", c9, "empirical");
    add("beta", beta, "closed-form");
    add("e_l1", e_l1, e_provenance);
  }
  return out;
}

ParameterLedger build_ledger(const Problem& prob, const LedgerOptions& opts) {
  const DomainMesh& mesh = *prob.mesh;
  const ExponentField& f = prob.fields;
  ParameterLedger led;
  led.has_cc = opts.compute_cc;
  led.has_sl = opts.compute_sl;
  led.p_minus = f.p_min;
  led.q_plus = f.q_max;
  led.r1_minus = f.r1_min;
  led.r2_plus = f.r2_max;
  led.sigma_minus = f.sigma_min;
  led.sigma_plus = f.sigma_max;
  led.alpha_plus = f.alpha_max;
  led.m0 = prob.kirchhoff.m0;
  led.m_t0 = prob.kirchhoff.m_t0;
  led.t0 = prob.kirchhoff.t0;
  led.volume = mesh.volume();
  led.c1_growth = prob.reaction.C1;
  led.c2_growth = prob.reaction.C2;
  led.c3_growth = prob.reaction.C3;
  led.c4_growth = prob.reaction.C4;
  led.c5_growth = prob.reaction.C5;
  led.c6_growth = prob.reaction.C6;
  led.c_provenance = prob.reaction.constants_provenance;
  led.beta = prob.reaction.beta;
  led.e_l1 = prob.reaction.e_l1;
  led.e_provenance = prob.reaction.e_l1 > 0.0 ? "sampled-majorant" : "closed-form";

  // nodewise exponent expressions, then extrema
  {
    double n1v = kInf, n2v = -kInf, t1v = kInf, t2v = -kInf;
    for (Index i = 0; i < mesh.count(); ++i) {
      n1v = std::min(n1v, f.p[i] * f.q_star[i] / (f.q_star[i] - f.p[i]));
      n2v = std::max(n2v, f.q[i] * f.p_star[i] / (f.p_star[i] - f.q[i]));
      t1v = std::min(t1v, f.p[i] / (f.q_star[i] - f.p[i]));
      t2v = std::max(t2v, f.q[i] / (f.p_star[i] - f.q[i]));
    }
    led.n1 = n1v;
    led.n2 = n2v;
    led.tau1 = t1v;
    led.tau2 = t2v;
  }

  led.k0 = 0.25 * (led.m0 / led.q_plus - led.m_t0 / led.r1_minus);
  if (!(led.k0 > 0.0))
    throw config_error("K0 <= 0: truncation point t0 violates M(t0) q^+ < m0 r1^-");

  // empirical embedding constants, fused single pass over the family
  led.kappa1_hat = estimate_kappa1(mesh, f.p, opts.seed, opts.starts,
                                   opts.descent_iters, &led.kappa1_argmin);

  const ModularSpec spec_h = h_spec(f);
  const ModularSpec spec_b = b_spec(f);
  const ModularSpec spec_alpha = single_spec(mesh, f.alpha);
  const ModularSpec spec_sigma =
      led.has_cc ? single_spec(mesh, f.sigma) : spec_alpha;

  std::vector<Vec> family =
      embedding_family(mesh, opts.seed, opts.starts, opts.with_bubbles);
  family.push_back(led.kappa1_argmin);

  double s_raw = kInf, c8_raw = 0.0, ca_raw = 0.0;
  for (const Vec& u : family) {
    const Vec gm = gradient_magnitude(mesh, u);
    const double grad_norm = luxemburg_norm(spec_h, gm);
    if (!(grad_norm > 0.0)) continue;
    const double b_norm = luxemburg_norm(spec_b, u);
    if (b_norm > 0.0) s_raw = std::min(s_raw, grad_norm / b_norm);
    const double a_norm = luxemburg_norm(spec_alpha, u);
    ca_raw = std::max(ca_raw, a_norm / grad_norm);
    if (led.has_cc) {
      const double sig_norm = luxemburg_norm(spec_sigma, u);
      c8_raw = std::max(c8_raw, std::max(sig_norm, b_norm) / grad_norm);
    }
  }
  if (!std::isfinite(s_raw))
    throw numeric_error("S estimate: every family member was degenerate");
  led.s_hat = s_raw / 1.05;
  led.c_alpha_hat = 1.25 * ca_raw;
  led.c9 = 0.5 * led.c1_growth * std::pow(led.c_alpha_hat, led.alpha_plus);

  if (led.has_cc) {
    led.c8_hat = std::max(1.0, 1.25 * c8_raw);

    // ell = p / sigma and its conjugate-exponent norm of the constant one
    Vec ell = f.p.cwiseQuotient(f.sigma);
    led.ell_minus = ell.minCoeff();
    led.ell_plus = ell.maxCoeff();
    if (!(led.ell_minus > 1.0))
      throw config_error("ell = p/sigma must exceed 1 (sigma^+ < p^- required)");
    Vec ell_conj(mesh.count());
    for (Index i = 0; i < mesh.count(); ++i) ell_conj[i] = ell[i] / (ell[i] - 1.0);
    led.norm_one_ell_conj =
        luxemburg_norm(single_spec(mesh, ell_conj), Vec::Ones(mesh.count()));

    led.a_coef = led.k0 * led.kappa1_hat;
    led.b_coef = 2.0 * led.c4_growth / led.r1_minus * led.norm_one_ell_conj;
    if (led.b_coef == 0.0) {
      led.k_const = 0.0;
    } else {
      double k = 0.0;
      for (double e : {led.ell_minus, led.ell_plus}) {
        const double expo = e / (e - 1.0);
        k = std::max(k, std::pow(e, -expo) * (e - 1.0) *
                            std::pow(led.a_coef, -1.0 / (e - 1.0)) *
                            std::pow(led.b_coef, expo));
      }
      led.k_const = k;
    }

    led.lambda1 = led.c4_growth + led.c5_growth > 0.0
                      ? led.kappa1_hat * led.r1_minus * led.k0 /
                            (led.c4_growth + led.c5_growth)
                      : kInf;
    led.lambda2 = led.c3_growth > 0.0
                      ? led.m0 * led.kappa1_hat / (2.0 * led.q_plus * led.c3_growth)
                      : kInf;

    if (!(led.sigma_minus < led.q_plus && led.q_plus < led.r1_minus))
      throw config_error("lambda3 requires sigma^- < q^+ < r1^-");
    led.a0 = led.m0 / (2.0 * led.q_plus * led.c2_growth *
                       std::pow(led.c8_hat, led.sigma_plus));
    led.b0 = std::pow(led.c8_hat, led.r2_plus - led.sigma_plus) /
             (led.c2_growth * led.r1_minus);
    const double dq = led.q_plus - led.sigma_minus;
    const double dr = led.r1_minus - led.sigma_minus;
    const double dd = led.r1_minus - led.q_plus;
    led.t_star = std::pow(dq * led.a0 / (dr * led.b0), 1.0 / dd);
    led.lambda3 = std::pow(led.a0, dr / dd) * std::pow(led.b0, -dq / dd) *
                  std::pow(dq / dr, dq / dd) * dd / dr;

    // lambda4 by bisection on the monotone containment predicate
    const double cap =
        std::min({std::pow(2.0 * led.q_plus, -1.0 / led.p_minus),
                  std::pow(std::pow(led.t_star, led.q_plus) / (2.0 * led.q_plus),
                           1.0 / led.p_minus),
                  std::pow(led.t0, 1.0 / led.p_minus)});
    if (cap >= led.t_star) {
      led.lambda4 = led.lambda3;
    } else {
      led.lambda4 = led.h_of(cap);  // t1(lambda) < cap  iff  lambda < h(cap)
    }

    led.lambda_star1 =
        std::min(std::min(led.lambda1, led.lambda2), std::min(led.lambda3, led.lambda4));

    const double base = led.k0 *
                        std::min(std::pow(led.s_hat, led.n1), std::pow(led.s_hat, led.n2)) *
                        std::min(std::pow(led.m0, led.tau1), std::pow(led.m0, led.tau2));
    if (led.k_const == 0.0) {
      led.lambda_star2 = kInf;
    } else {
      double l2 = kInf;
      for (double e : {led.ell_minus, led.ell_plus}) {
        const double expo = e / (e - 1.0);
        l2 = std::min(l2, std::pow(base / led.k_const, 1.0 / expo));
      }
      led.lambda_star2 = l2;
    }
    led.lambda_star = std::min(led.lambda_star1, led.lambda_star2);
    if (!(led.lambda_star > 0.0))
      throw config_error("lambda_star is not positive; check the reaction constants");

    led.t1_samples.clear();
    for (int j = 1; j <= 10; ++j) {
      const double lam = led.lambda3 * j / 11.0;
      led.t1_samples.emplace_back(lam, led.t1(lam));
    }
  }
  return led;
}

}  // namespace dplab
