#pragma once

#include <string>
#include <vector>

#include "dplab/fields.hpp"
#include "dplab/mesh.hpp"

namespace dplab {

// Generalized power-law integrand in one of two shapes:
//   weighted-single: w(x) t^m(x)         (variable-exponent Lebesgue space)
//   two-term:        b(x) t^r(x) + c(x) t^s(x)   with r < s, b > 0, c >= 0
// The two-term shape houses the H, A-integrand, B and G* integrands.
struct ModularSpec {
  enum class Kind { WeightedSingle, TwoTerm };
  Kind kind = Kind::TwoTerm;
  const DomainMesh* mesh = nullptr;

  Vec w, m;        // weighted-single
  Vec b, r, c, s;  // two-term

  // exponent extrema actually active in the integrand (nodes with zero
  // coefficient do not contribute)
  double expo_min = 0.0;
  double expo_max = 0.0;
};

ModularSpec single_spec(const DomainMesh& mesh, const Vec& exponent, const Vec& weight);
ModularSpec single_spec(const DomainMesh& mesh, const Vec& exponent);
ModularSpec two_term_spec(const DomainMesh& mesh, const Vec& b, const Vec& r,
                          const Vec& c, const Vec& s);

// The four instances used throughout: H(x,t) = t^p + a t^q,
// the A-density (1/p)t^p + (a/q)t^q, B(x,t) = c1|t|^r1 + c2 a^{r2/q} |t|^r2,
// and G*(x,t) = t^{p*} + a^{q*/q} t^{q*}.
ModularSpec h_spec(const ExponentField& f);
ModularSpec a_density_spec(const ExponentField& f);
ModularSpec b_spec(const ExponentField& f);
ModularSpec gstar_spec(const ExponentField& f);

// rho(u) = integral of Phi(x,|u|). Nonnegative; zero iff u == 0 when b > 0.
// Throws range_error (with node index) on overflow.
double modular(const ModularSpec& spec, const Vec& u);

// Gauge norm: 0 for u == 0 (interior-zero fields count as 0 by the
// zero-trace convention), otherwise the unique tau > 0 with rho(u/tau) = 1,
// bracketed by doubling/halving and bisected. The documented contract is
// 1e-10 relative on tau; the iteration actually runs to ~1e-15 so that
// margin checks against closed forms stay meaningful at 1e-12 slack.
double luxemburg_norm(const ModularSpec& spec, const Vec& u);

struct InequalityMargin {
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // (rhs - lhs) / max(1, |lhs|, |rhs|)
};

struct NormModularReport {
  double norm = 0.0;
  double rho = 0.0;
  std::vector<InequalityMargin> checks;
  double worst_margin() const;
};

// Evaluates every norm-modular sandwich applicable to the integrand kind,
// branching on rho(u) <=> 1, and reports normalized margins. All margins
// must come out >= -1e-12 for valid data.
NormModularReport check_norm_modular(const ModularSpec& spec, const Vec& u);

struct HolderPair {
  double lhs = 0.0;  // |integral of u v dmu|
  double rhs = 0.0;  // 2 ||u||_m ||v||_m'
};

// Hoelder pairing in L^{m(.)}_mu with dmu = weight dx. m(x) > 1 required.
HolderPair holder_pairing(const DomainMesh& mesh, const Vec& u, const Vec& v,
                          const Vec& m, const Vec& weight);

struct YoungTriple {
  double lhs = 0.0;  // a b
  double mid = 0.0;  // (1/m) eps a^m + ((m-1)/m) eps^{-1/(m-1)} b^{m/(m-1)}
  double rhs = 0.0;  // eps a^m + (1 + eps^{-1/(m-1)}) b^{m/(m-1)}
};

YoungTriple young_check(double a, double b, double eps, double m);

// Per-n deviation  integral |Phi(x,|f_n|) - Phi(x,|f_n - f|) - Phi(x,|f|)|.
std::vector<double> brezis_lieb_deviation(const ModularSpec& spec,
                                          const std::vector<Vec>& f_seq,
                                          const Vec& f);

// The working norm on the zero-trace space: ||u|| = || |grad u| ||_H.
double x_norm(const ExponentField& f, const Vec& u);

}  // namespace dplab
