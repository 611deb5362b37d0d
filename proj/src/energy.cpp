#include "dplab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dplab/errors.hpp"

namespace dplab {

namespace {

// |t|^{e-1} sign(t), extended by 0 at t = 0 (all catalogued exponents e > 1)
double odd_power(double t, double e_minus_1) {
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(t), e_minus_1), t);
}

// 16-point Gauss-Legendre rule on [-1,1]
constexpr int kGl = 8;
constexpr double kGlX[kGl] = {0.0950125098376374, 0.2816035507792589,
                              0.4580167776572274, 0.6178762444026438,
                              0.7554044083550030, 0.8656312023878318,
                              0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[kGl] = {0.1894506104550685, 0.1826034150449236,
                              0.1691565193950025, 0.1495959888165767,
                              0.1246289712555339, 0.0951585116824928,
                              0.0622535239386479, 0.0271524594117541};

// integral of s^{d-1} log^k(e+s) ds over [0, T]. The substitution s = y^3
// removes the fractional-power endpoint singularity (3d - 1 > 2), after
// which composite GL16 resolves the integrand to near machine precision.
double log_power_primitive(double d, double k, double T) {
  if (T <= 0.0) return 0.0;
  const double ymax = std::cbrt(T);
  double acc = 0.0;
  constexpr int kPanels = 4;
  for (int panel = 0; panel < kPanels; ++panel) {
    const double a = ymax * panel / kPanels, b = ymax * (panel + 1) / kPanels;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < kGl; ++i) {
      for (int sign = -1; sign <= 1; sign += 2) {
        const double y = c + sign * h * kGlX[i];
        acc += h * kGlW[i] * 3.0 * std::pow(y, 3.0 * d - 1.0) *
               std::pow(std::log(std::exp(1.0) + y * y * y), k);
      }
    }
  }
  return acc;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        std::exp(llo + (lhi - llo) * i / (n - 1.0));
  return out;
}

}  // namespace

double KirchhoffSpec::M(double t) const {
  switch (kind) {
    case Kind::Constant:
      return m0;
    case Kind::Affine:
      return m0 + kappa * t;
    case Kind::Saturating:
      return m0 + kappa * std::min(t, 0.5 * tau0);
  }
  return m0;
}

double KirchhoffSpec::M0(double t) const { return M(std::min(t, t0)); }

double KirchhoffSpec::M0_hat(double t) const {
  if (t <= 0.0) return 0.0;
  auto anti = [this](double x) {  // antiderivative of M on [0, x]
    switch (kind) {
      case Kind::Constant:
        return m0 * x;
      case Kind::Affine:
        return m0 * x + 0.5 * kappa * x * x;
      case Kind::Saturating: {
        const double sat = 0.5 * tau0;
        if (x <= sat) return m0 * x + 0.5 * kappa * x * x;
        return m0 * x + kappa * (0.5 * sat * sat + sat * (x - sat));
      }
    }
    return m0 * x;
  };
  if (t <= t0) return anti(t);
  return anti(t0) + m_t0 * (t - t0);
}

KirchhoffSpec make_kirchhoff(KirchhoffSpec::Kind kind, double m0, double kappa,
                             double tau0, double q_plus, double r1_minus) {
  if (!(m0 > 0.0)) throw config_error("kirchhoff: m0 must be positive");
  if (!(tau0 > 0.0)) throw config_error("kirchhoff: tau0 must be positive");
  if (kappa < 0.0) throw config_error("kirchhoff: kappa must be nonnegative");
  if (!(q_plus < r1_minus))
    throw config_error("kirchhoff: requires q^+ < r1^-, got q^+ = " +
                       std::to_string(q_plus) + ", r1^- = " + std::to_string(r1_minus));
  KirchhoffSpec k;
  k.kind = kind;
  k.m0 = m0;
  k.kappa = kappa;
  k.tau0 = tau0;

  const double cap = 0.99 * m0 * r1_minus;
  const double tmax = std::min(tau0, 1.0);
  const int grid = 1000;
  double best = -1.0;
  for (int j = 1; j < grid; ++j) {
    const double t = tmax * j / grid;
    if (k.M(t) * q_plus <= cap) best = t;
  }
  if (best <= 0.0)
    throw config_error("kirchhoff: no admissible truncation point t0 in (0, min(tau0,1))");
  k.t0 = best;
  k.m_t0 = k.M(best);
  return k;
}

double CriticalTerm::B(Index i, double t) const {
  const ExponentField& f = *fields;
  const double aw = f.a[i] > 0.0 ? std::pow(f.a[i], f.r2[i] / f.q[i]) : 0.0;
  return f.c1[i] * odd_power(t, f.r1[i] - 1.0) +
         f.c2[i] * aw * odd_power(t, f.r2[i] - 1.0);
}

double CriticalTerm::B_hat(Index i, double t) const {
  if (t == 0.0) return 0.0;
  const ExponentField& f = *fields;
  const double aw = f.a[i] > 0.0 ? std::pow(f.a[i], f.r2[i] / f.q[i]) : 0.0;
  const double at = std::abs(t);
  return f.c1[i] * std::pow(at, f.r1[i]) / f.r1[i] +
         f.c2[i] * aw * std::pow(at, f.r2[i]) / f.r2[i];
}

double ReactionSpec::f(Index i, double t) const {
  switch (entry) {
    case Entry::Power:
      if (family == Family::ConcaveConvex)
        return coef1 * odd_power(t, delta[i] - 1.0) +
               coef2 * odd_power(t, fields->p[i] - 1.0);
      return coef1 * odd_power(t, delta[i] - 1.0) +
             coef2 * odd_power(t, fields->q_max - 1.0);
    case Entry::LogPower:
      return coef1 * odd_power(t, delta[i] - 1.0) *
                 std::pow(std::log(std::exp(1.0) + std::abs(t)), kappa_exp[i]) +
             coef2 * odd_power(t, m_exp[i] - 1.0);
    case Entry::PowerM:
      return coef1 * odd_power(t, delta[i] - 1.0) +
             coef2 * odd_power(t, m_exp[i] - 1.0);
    case Entry::CutoffPower:
      return coef1 * odd_power(t, n_exp[i] - 1.0);
  }
  return 0.0;
}

double ReactionSpec::F(Index i, double t) const {
  if (t == 0.0) return 0.0;
  const double at = std::abs(t);
  switch (entry) {
    case Entry::Power:
      if (family == Family::ConcaveConvex)
        return coef1 * std::pow(at, delta[i]) / delta[i] +
               coef2 * std::pow(at, fields->p[i]) / fields->p[i];
      return coef1 * std::pow(at, delta[i]) / delta[i] +
             coef2 * std::pow(at, fields->q_max) / fields->q_max;
    case Entry::LogPower:
      return coef1 * log_power_primitive(delta[i], kappa_exp[i], at) +
             coef2 * std::pow(at, m_exp[i]) / m_exp[i];
    case Entry::PowerM:
      return coef1 * std::pow(at, delta[i]) / delta[i] +
             coef2 * std::pow(at, m_exp[i]) / m_exp[i];
    case Entry::CutoffPower:
      return coef1 * std::pow(at, n_exp[i]) / n_exp[i];
  }
  return 0.0;
}

namespace {

void derive_growth_constants(ReactionSpec& spec) {
  const ExponentField& f = *spec.fields;
  const double delta_min = spec.delta.minCoeff();
  const double delta_max = spec.delta.maxCoeff();

  if (spec.entry == ReactionSpec::Entry::LogPower) {
    // sampled majorants over a log t-grid, inflated by 1.05
    const auto grid = log_spaced(1e-6, 1e6, 120);
    double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0;
    for (Index i = 0; i < f.mesh->count(); ++i) {
      for (double t : grid) {
        const double ft = std::abs(spec.f(i, t));
        const double Ft = spec.F(i, t);
        const double gt = std::max(0.0, f.r1_min * Ft - spec.f(i, t) * t);
        c1 = std::max(c1, ft / (1.0 + std::pow(t, spec.alpha[i] - 1.0)));
        if (t <= 1.0) {
          c2 = std::max(c2, Ft / std::pow(t, spec.sigma[i]));
          c4 = std::max(c4, gt / std::pow(t, spec.sigma[i]));
        } else {
          c3 = std::max(c3, Ft / std::pow(t, f.p[i]));
          c5 = std::max(c5, gt / std::pow(t, f.p[i]));
        }
      }
    }
    spec.C1 = 1.05 * c1;
    spec.C2 = 1.05 * c2;
    spec.C3 = 1.05 * c3;
    spec.C4 = 1.05 * c4;
    spec.C5 = 1.05 * c5;
    spec.C6 = spec.coef1 / delta_max;
    spec.constants_provenance = "sampled-majorant";
    return;
  }

  spec.constants_provenance = "closed-form";
  spec.C1 = spec.coef1 + spec.coef2;
  if (spec.family == ReactionSpec::Family::ConcaveConvex) {
    switch (spec.entry) {
      case ReactionSpec::Entry::Power:
        spec.C2 = spec.coef1 / delta_min;
        spec.C3 = spec.coef2 / f.p_min;
        spec.C4 = spec.coef1 * (f.r1_min / delta_min - 1.0);
        spec.C5 = spec.coef2 * (f.r1_min / f.p_min - 1.0);
        break;
      case ReactionSpec::Entry::CutoffPower:
        spec.C2 = spec.coef1 / delta_min;
        spec.C3 = spec.coef1 / delta_min;
        spec.C4 = spec.coef1 * (f.r1_min / delta_min - 1.0);
        spec.C5 = spec.C4;
        break;
      default:
        break;
    }
    spec.C6 = spec.coef1 / delta_max;
  }
}

void derive_e_majorant(ReactionSpec& spec) {
  const ExponentField& f = *spec.fields;
  const double delta_min = spec.delta.minCoeff();

  // beta F - f t <= 0 identically when every active exponent is >= beta
  bool zero = false;
  if (spec.entry == ReactionSpec::Entry::Power &&
      spec.beta <= std::min(delta_min, f.q_max))
    zero = true;
  if (spec.entry == ReactionSpec::Entry::CutoffPower && spec.beta <= f.q_max &&
      spec.beta <= delta_min)
    zero = true;
  if (spec.entry == ReactionSpec::Entry::PowerM && spec.coef2 == 0.0 &&
      spec.beta <= delta_min)
    zero = true;
  if (zero) {
    spec.e_const = 0.0;
    spec.e_l1 = 0.0;
    return;
  }

  const auto grid = log_spaced(1e-6, 1e3, 120);
  double worst = 0.0;
  for (Index i = 0; i < f.mesh->count(); ++i)
    for (double t : grid)
      worst = std::max(worst,
                       spec.beta * spec.F(i, t) - spec.f(i, t) * t);
  spec.e_const = worst;
  spec.e_l1 = worst * f.mesh->volume();
  if (worst > 0.0) spec.constants_provenance = "sampled-majorant";
}

}  // namespace

ReactionSpec make_reaction(const ExponentField& fields, const ReactionParams& params) {
  const DomainMesh& mesh = *fields.mesh;
  ReactionSpec spec;
  spec.family = params.family;
  spec.entry = params.entry;
  spec.fields = &fields;
  spec.coef1 = params.coef1;
  spec.coef2 = params.coef2;
  spec.delta = params.delta;
  spec.m_exp = params.m_exp.size() ? params.m_exp : fields.p;
  spec.kappa_exp = params.kappa_exp.size() ? params.kappa_exp : Vec::Ones(mesh.count());
  spec.ball_center = params.ball_center;
  spec.ball_radius = params.ball_radius;

  if (spec.coef1 <= 0.0) throw config_error("reaction: coef1 must be positive");
  if (spec.coef2 < 0.0) throw config_error("reaction: coef2 must be nonnegative");
  if (spec.delta.size() != mesh.count())
    throw config_error("reaction: delta table does not conform to mesh");
  if (!(fields.q_max < fields.r1_min))
    throw config_error("reaction: requires q^+ < r1^-");

  const bool superlinear = spec.family == ReactionSpec::Family::Superlinear;
  if (superlinear && spec.entry == ReactionSpec::Entry::LogPower)
    throw config_error("reaction: log_power entry is concave-convex only");
  if (!superlinear && spec.entry == ReactionSpec::Entry::PowerM)
    throw config_error("reaction: power_m entry is superlinear only");

  // cutoff-interpolated exponent n = phi delta + (1-phi) other
  if (spec.entry == ReactionSpec::Entry::CutoffPower) {
    spec.n_exp.resize(mesh.count());
    for (Index i = 0; i < mesh.count(); ++i) {
      double d2 = 0.0;
      for (int k = 0; k < mesh.dim; ++k) {
        const double d = mesh.coords(i, k) - params.cutoff_center[k];
        d2 += d * d;
      }
      const double phi =
          smoothstep_cutoff(std::sqrt(d2), params.cutoff_radius).value;
      const double other = superlinear ? fields.q_max : spec.m_exp[i];
      spec.n_exp[i] = phi * spec.delta[i] + (1.0 - phi) * other;
    }
    spec.ball_center = params.cutoff_center;
    spec.ball_radius = params.cutoff_radius;
  }

  if (superlinear) {
    spec.beta = params.beta > 0.0 ? params.beta : fields.q_max;
    if (spec.beta < fields.q_max || spec.beta >= fields.r1_min)
      throw config_error("reaction: beta must lie in [q^+, r1^-)");
    const double delta_min = spec.delta.minCoeff();
    if (delta_min < fields.q_max)
      throw config_error("reaction: superlinear entries require q^+ <= delta");
    for (Index i = 0; i < mesh.count(); ++i) {
      if (!(spec.delta[i] < fields.r1[i]))
        throw config_error("reaction: delta must stay below r1");
      if (spec.entry == ReactionSpec::Entry::PowerM &&
          !(spec.m_exp[i] < fields.p[i]))
        throw config_error("reaction: power_m requires m < p");
    }
    // alpha dominates every active growth exponent and stays in (q^+, r1)
    spec.alpha.resize(mesh.count());
    for (Index i = 0; i < mesh.count(); ++i)
      spec.alpha[i] =
          std::max(spec.delta[i], 0.5 * (fields.q_max + fields.r1[i]));
    spec.sigma = spec.delta;  // recorded; the superlinear thresholds ignore it
  } else {
    const double delta_max = spec.delta.maxCoeff();
    if (!(delta_max < fields.p_min))
      throw config_error("reaction: concave-convex entries require delta^+ < p^-");
    for (Index i = 0; i < mesh.count(); ++i) {
      if (spec.entry != ReactionSpec::Entry::Power) {
        if (!(spec.delta[i] <= spec.m_exp[i] && spec.m_exp[i] <= fields.p[i]))
          throw config_error("reaction: requires delta <= m <= p");
        if (spec.entry == ReactionSpec::Entry::LogPower &&
            !(spec.kappa_exp[i] > 1.0))
          throw config_error("reaction: log exponent kappa must exceed 1");
      }
    }
    spec.alpha.resize(mesh.count());
    for (Index i = 0; i < mesh.count(); ++i)
      spec.alpha[i] = 0.5 * (fields.q_max + fields.r1[i]);
    spec.sigma = spec.delta;
  }
  for (Index i = 0; i < mesh.count(); ++i)
    if (!(spec.alpha[i] < fields.r1[i]))
      throw config_error("reaction: alpha must stay below r1");

  const auto ball = nodes_in_ball(mesh, spec.ball_center, spec.ball_radius);
  if (ball.empty()) throw config_error("reaction: ball contains no mesh node");
  spec.q_ball_max = 0.0;
  for (Index id : ball) spec.q_ball_max = std::max(spec.q_ball_max, fields.q[id]);

  derive_growth_constants(spec);
  if (superlinear) derive_e_majorant(spec);
  return spec;
}

Eigen::Vector2d flux_A(double p, double q, double a, const Eigen::Vector2d& xi,
                       int dim) {
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  double mag2 = 0.0;
  for (int k = 0; k < dim; ++k) mag2 += xi[k] * xi[k];
  const double mag = std::sqrt(mag2);
  if (mag == 0.0) return out;
  const double scale = std::pow(mag, p - 1.0) + a * std::pow(mag, q - 1.0);
  for (int k = 0; k < dim; ++k) out[k] = scale * xi[k] / mag;
  return out;
}

Mat flux_rows(const ExponentField& f, const Mat& grad) {
  const Index n = grad.rows();
  Mat out = Mat::Zero(n, grad.cols());
  for (Index i = 0; i < n; ++i) {
    const double mag = grad.row(i).norm();
    if (mag == 0.0) continue;
    const double scale =
        std::pow(mag, f.p[i] - 1.0) + f.a[i] * std::pow(mag, f.q[i] - 1.0);
    out.row(i) = (scale / mag) * grad.row(i);
  }
  return out;
}

Vec a_density(const ExponentField& f, const Mat& grad) {
  const Index n = grad.rows();
  Vec out = Vec::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const double mag = grad.row(i).norm();
    if (mag == 0.0) continue;
    out[i] = std::pow(mag, f.p[i]) / f.p[i] +
             f.a[i] * std::pow(mag, f.q[i]) / f.q[i];
  }
  return out;
}

double a_integral(const Problem& prob, const Vec& u) {
  return integrate(*prob.mesh, a_density(prob.fields, gradient(*prob.mesh, u)));
}

CutoffValue smoothstep_cutoff(double t, double edge) {
  if (t <= edge) return {1.0, 0.0};
  if (t >= 2.0 * edge) return {0.0, 0.0};
  const double tau = (t - edge) / edge;
  const double s = 1.0 - tau * tau * tau * (10.0 - 15.0 * tau + 6.0 * tau * tau);
  const double ds = -30.0 * tau * tau * (1.0 - tau) * (1.0 - tau) / edge;
  return {s, ds};
}

namespace {

struct EnergyParts {
  double a_int = 0.0;
  double f_int = 0.0;
  double bhat_int = 0.0;
};

EnergyParts energy_parts(const Problem& prob, const Vec& u) {
  const DomainMesh& mesh = *prob.mesh;
  EnergyParts parts;
  parts.a_int = a_integral(prob, u);
  Vec fv(mesh.count()), bv(mesh.count());
  for (Index i = 0; i < mesh.count(); ++i) {
    fv[i] = prob.reaction.F(i, u[i]);
    bv[i] = prob.critical.B_hat(i, u[i]);
  }
  parts.f_int = integrate(mesh, fv);
  parts.bhat_int = integrate(mesh, bv);
  if (!std::isfinite(parts.a_int) || !std::isfinite(parts.f_int) ||
      !std::isfinite(parts.bhat_int))
    throw range_error("energy overflow");
  return parts;
}

// Nodal representation of the weak form
//   flux_factor * integral A(x,grad u).grad v - integral (fc f + bc B) v,
// divided by the quadrature weights and clamped to the zero-trace space.
Vec assemble_gradient(const Problem& prob, const Vec& u, double flux_factor,
                      double fc, double bc) {
  const DomainMesh& mesh = *prob.mesh;
  const Mat grad = gradient(mesh, u);
  Vec pairing = flux_factor * divergence_adjoint(mesh, flux_rows(prob.fields, grad));
  for (Index i = 0; i < mesh.count(); ++i)
    pairing[i] -= mesh.weights[i] *
                  (fc * prob.reaction.f(i, u[i]) + bc * prob.critical.B(i, u[i]));
  Vec g(mesh.count());
  for (Index i = 0; i < mesh.count(); ++i)
    g[i] = mesh.boundary[static_cast<std::size_t>(i)] ? 0.0 : pairing[i] / mesh.weights[i];
  if (!g.allFinite()) throw range_error("gradient overflow");
  return g;
}

}  // namespace

double energy_phi_lambda(const Problem& prob, const Vec& u, double lambda) {
  const EnergyParts parts = energy_parts(prob, u);
  return prob.kirchhoff.M0_hat(parts.a_int) - lambda * parts.f_int - parts.bhat_int;
}

Vec gradient_phi_lambda(const Problem& prob, const Vec& u, double lambda) {
  const double j = a_integral(prob, u);
  return assemble_gradient(prob, u, prob.kirchhoff.M0(j), lambda, 1.0);
}

double energy_T_lambda(const Problem& prob, const Vec& u, double lambda,
                       double t1_pow) {
  const EnergyParts parts = energy_parts(prob, u);
  const CutoffValue cut = smoothstep_cutoff(parts.a_int, t1_pow);
  return prob.kirchhoff.M0_hat(parts.a_int) -
         cut.value * (lambda * parts.f_int + parts.bhat_int);
}

Vec gradient_T_lambda(const Problem& prob, const Vec& u, double lambda,
                      double t1_pow) {
  const EnergyParts parts = energy_parts(prob, u);
  const CutoffValue cut = smoothstep_cutoff(parts.a_int, t1_pow);
  const double lower = lambda * parts.f_int + parts.bhat_int;
  const double flux_factor =
      prob.kirchhoff.M0(parts.a_int) - cut.derivative * lower;
  return assemble_gradient(prob, u, flux_factor, cut.value * lambda, cut.value);
}

double energy_psi_theta(const Problem& prob, const Vec& u, double theta) {
  const EnergyParts parts = energy_parts(prob, u);
  return parts.a_int - parts.f_int - theta * parts.bhat_int;
}

Vec gradient_psi_theta(const Problem& prob, const Vec& u, double theta) {
  return assemble_gradient(prob, u, 1.0, 1.0, theta);
}

}  // namespace dplab
