#pragma once

#include <string>

#include "dplab/fields.hpp"
#include "dplab/mesh.hpp"

namespace dplab {

// Nonlocal coefficient M with its truncation at t0 and the antiderivative of
// the truncation, in closed form per catalogue entry.
struct KirchhoffSpec {
  enum class Kind { Constant, Affine, Saturating };
  Kind kind = Kind::Constant;
  double m0 = 1.0;
  double kappa = 0.0;  // slope for affine / saturating
  double tau0 = 1.0;   // monotone-continuity window
  double t0 = 0.0;     // truncation point, M(t0) q^+ < m0 r1^-
  double m_t0 = 1.0;   // cached M(t0)

  double M(double t) const;
  double M0(double t) const;      // M(min(t, t0))
  double M0_hat(double t) const;  // antiderivative of M0, M0_hat(0) = 0
};

// Picks t0 as the largest grid value in (0, min(tau0,1)) with
// M(t0) q^+ <= 0.99 m0 r1^-. Throws config_error when no such t0 exists.
KirchhoffSpec make_kirchhoff(KirchhoffSpec::Kind kind, double m0, double kappa,
                             double tau0, double q_plus, double r1_minus);

// Critical reaction B(x,t) = c1|t|^{r1-2}t + c2 a^{r2/q} |t|^{r2-2}t and its
// primitive. |t|^{r-2}t is extended by 0 at t = 0.
struct CriticalTerm {
  const ExponentField* fields = nullptr;
  double B(Index node, double t) const;
  double B_hat(Index node, double t) const;
};

// Subcritical reaction catalogue. Two families, three entries each:
//   concave-convex:  power        f = k1|t|^{d-2}t + k2|t|^{p-2}t
//                    log_power    f = k1|t|^{d-2}t log^kap(e+|t|) + k2|t|^{m-2}t
//                    cutoff_power f = k1|t|^{n-2}t, n = phi d + (1-phi) m
//   superlinear:     power        f = k1|t|^{d-2}t + k2|t|^{q^+ -2}t
//                    power_m      f = k1|t|^{d-2}t + k2|t|^{m-2}t
//                    cutoff_power f = k1|t|^{n-2}t, n = phi d + (1-phi) q^+
struct ReactionSpec {
  enum class Family { ConcaveConvex, Superlinear };
  enum class Entry { Power, LogPower, PowerM, CutoffPower };

  Family family = Family::ConcaveConvex;
  Entry entry = Entry::Power;
  const ExponentField* fields = nullptr;

  double coef1 = 1.0, coef2 = 0.0;
  Vec delta, m_exp, kappa_exp;  // entry exponent tables
  Vec n_exp;                    // cutoff-interpolated exponent (cutoff entries)

  Eigen::Vector2d ball_center{0.5, 0.5};  // ball of the local conditions
  double ball_radius = 0.25;
  double q_ball_max = 0.0;

  double beta = 0.0;     // superlinear exponent in [q^+, r1^-)
  double e_const = 0.0;  // constant majorant of beta F - f t, clipped at 0
  double e_l1 = 0.0;     // |Omega| * e_const

  // growth constants; derivation documented via provenance
  double C1 = 0, C2 = 0, C3 = 0, C4 = 0, C5 = 0, C6 = 0;
  std::string constants_provenance = "closed-form";

  Vec alpha, sigma;  // derived reaction exponents

  double f(Index node, double t) const;
  double F(Index node, double t) const;  // exact primitive, F(x,0) = 0
};

struct ReactionParams {
  ReactionSpec::Family family = ReactionSpec::Family::ConcaveConvex;
  ReactionSpec::Entry entry = ReactionSpec::Entry::Power;
  double coef1 = 1.0, coef2 = 0.0;
  Vec delta, m_exp, kappa_exp;
  Eigen::Vector2d ball_center{0.5, 0.5};
  double ball_radius = 0.25;
  Eigen::Vector2d cutoff_center{0.5, 0.5};
  double cutoff_radius = 0.1;
  double beta = 0.0;  // 0 => q^+
};

ReactionSpec make_reaction(const ExponentField& fields, const ReactionParams& params);

// Problem bundle every functional below consumes.
struct Problem {
  const DomainMesh* mesh = nullptr;
  ExponentField fields;
  KirchhoffSpec kirchhoff;
  ReactionSpec reaction;
  CriticalTerm critical;
};

// |xi|^{p-2} xi + a |xi|^{q-2} xi  with value 0 at xi = 0.
Eigen::Vector2d flux_A(double p, double q, double a, const Eigen::Vector2d& xi, int dim);

// Nodal flux rows and the A-density (1/p)|G|^p + (a/q)|G|^q for G = grad u.
Mat flux_rows(const ExponentField& f, const Mat& grad);
Vec a_density(const ExponentField& f, const Mat& grad);

// integral of A(x, grad u) dx
double a_integral(const Problem& prob, const Vec& u);

// Quintic smoothstep cutoff: 1 on [0, edge], 0 on [2 edge, inf).
struct CutoffValue {
  double value = 0.0;
  double derivative = 0.0;
};
CutoffValue smoothstep_cutoff(double t, double edge);

double energy_phi_lambda(const Problem& prob, const Vec& u, double lambda);
Vec gradient_phi_lambda(const Problem& prob, const Vec& u, double lambda);

// t1_pow = t1(lambda)^{p^-}, supplied by the parameter ledger.
double energy_T_lambda(const Problem& prob, const Vec& u, double lambda, double t1_pow);
Vec gradient_T_lambda(const Problem& prob, const Vec& u, double lambda, double t1_pow);

double energy_psi_theta(const Problem& prob, const Vec& u, double theta);
Vec gradient_psi_theta(const Problem& prob, const Vec& u, double theta);

}  // namespace dplab
