#pragma once

#include <vector>

#include "dplab/fields.hpp"
#include "dplab/ledger.hpp"
#include "dplab/mesh.hpp"

namespace dplab {

// Rescaled bump family u_eps(x) = eps^{-s} eta((x - x0)/eps) with eta the
// radial quintic plateau bump: 1 inside radius 1/2, 0 outside radius 1.
struct BubbleFamily {
  const DomainMesh* mesh = nullptr;
  Eigen::Vector2d center{0.5, 0.5};
  double amplitude_exponent = 0.0;  // s
  std::vector<double> eps;
  std::vector<Vec> fields;  // realized zero-trace nodal data, one per eps
};

// eta as a function of the scaled radius rho = |x - x0|/eps.
double bubble_profile(double rho);

BubbleFamily make_bubbles(const DomainMesh& mesh, const Eigen::Vector2d& x0,
                          const std::vector<double>& eps_list, double s);

struct ConcentrationRow {
  double eps = 0.0;
  double mu_mass = 0.0;  // integral of H(x, |grad u_eps|) over B_eps(x0)
  double nu_mass = 0.0;  // integral of B(x, u_eps) over B_eps(x0)
  double lhs = 0.0;      // S_hat * min(nu^{1/p*(x0)}, nu^{1/q*(x0)})
  double rhs = 0.0;      // max(mu^{1/p(x0)}, mu^{1/q(x0)})
  double margin = 0.0;   // rhs - lhs

  // eps-localized variant with extrema of the exponents over the balls
  double nu_half_mass = 0.0;  // over B_{eps/2}(x0)
  double local_lhs = 0.0;     // S_hat * min(nu_half^{1/r1_eps^-}, nu_half^{1/r2_eps^+})
  double local_rhs = 0.0;     // max(mu^{1/p_eps^-}, mu^{1/q_eps^+})
  double correction = 0.0;    // ||u grad phi_eps||_H with u = 0, must vanish
};

std::vector<ConcentrationRow> ccp_quotient_trace(const BubbleFamily& family,
                                                 const ExponentField& fields,
                                                 const ParameterLedger& led);

}  // namespace dplab
