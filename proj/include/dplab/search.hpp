#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dplab/energy.hpp"
#include "dplab/ledger.hpp"
#include "dplab/mesh.hpp"

namespace dplab {

struct SolverOptions {
  int max_iters = 5000;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double grad_tol = 1e-6;  // on the quadrature 2-norm of the nodal gradient
  double step_cap = 1e6;
  enum class Precond { None, Diagonal, Laplacian };
  Precond precond = Precond::None;
  bool record_trace = true;
};

struct SolverReport {
  int iters = 0;
  std::vector<double> energy_trace;  // nonincreasing by construction
  double final_energy = 0.0;
  double final_grad_norm = 0.0;  // sqrt(sum w g^2), the H-dual surrogate
  double final_a_integral = 0.0;
  bool converged = false;
  bool reached_negative_level = false;
  bool containment_ok = false;  // integral A < t1(lambda)^{p^-}
  bool ps_level_ok = false;
  Vec final_u;
  std::uint64_t seed = 0;
};

struct Objective {
  std::function<double(const Vec&)> energy;
  std::function<Vec(const Vec&)> gradient;
};

// Monotone Armijo descent. Directions are -g, -g/(1+a), or the stiffness
// Riesz representative depending on options.precond. Stops on the gradient
// tolerance, the iteration cap, or line-search stagnation.
SolverReport descend(const Problem& prob, const Objective& objective,
                     const Vec& u0, const SolverOptions& options);

// First k Dirichlet-Laplacian eigenfunctions of the node set of the ball,
// zero-extended and normalized to ||.|| = 1. Eigenvalues returned ascending.
std::vector<Vec> seed_from_eigen_subspace(const DomainMesh& mesh,
                                          const ExponentField& fields,
                                          const Eigen::Vector2d& ball_center,
                                          double ball_radius, int k,
                                          std::vector<double>* eigenvalues = nullptr);

// Descends T_lambda from a small-amplitude first-eigenfunction seed (the
// amplitude is halved from the t1(lambda) scale until the energy is
// negative). When the final level is negative, the containment identity
// integral A < t1^{p^-} is asserted; a violation throws verification_error
// since it would falsify the discretization.
SolverReport solve_concave_convex(const Problem& prob, const ParameterLedger& led,
                                  double lambda, const SolverOptions& options,
                                  std::uint64_t seed);

struct DecayRow {
  double lambda = 0.0;
  double t1 = 0.0;
  double t1_pow = 0.0;  // containment bound on the A-integral
  double norm_u = 0.0;  // ||grad u||_H at the final iterate
  double a_integral = 0.0;
  double energy = 0.0;
  double grad_norm = 0.0;
  bool reached_negative_level = false;
  bool containment_ok = false;
  bool gap = false;  // run failed to reach a negative level
};

std::vector<DecayRow> decay_study(const Problem& prob, const ParameterLedger& led,
                                  const std::vector<double>& lambda_grid,
                                  const SolverOptions& options, std::uint64_t seed);

struct SlAuditRow {
  int k = 0;
  double R = 0.0;
  double level = 0.0;  // amplitude-sweep surrogate of the min-max level
  double ps_level = 0.0;
  double c_star = 0.0;
  bool positive = false;
  bool below_ps = false;
  bool below_c_star = false;
  double descent_energy = 0.0;  // final energy of the descent from the hump
  double descent_grad_norm = 0.0;
};

// Audits the superlinear level chain at finite resolution: for each k the
// surrogate level is the running maximum of Psi_theta along amplitude rays
// through the eigen-subspace seeds (plus seeded random combinations),
// capped at ||u|| = R_k. Labels per row whether the level sits below both
// ps_level_sl(theta) and c_star(R_k).
std::vector<SlAuditRow> sl_level_audit(const Problem& prob,
                                       const ParameterLedger& led, double theta,
                                       int k_pairs, const std::vector<double>& r_list,
                                       const SolverOptions& options,
                                       std::uint64_t seed);

}  // namespace dplab
