#include "dplab/search.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "dplab/errors.hpp"
#include "dplab/modular.hpp"
#include "dplab/rng.hpp"

namespace dplab {

namespace {

double weighted_norm(const DomainMesh& mesh, const Vec& g) {
  double acc = 0.0;
  for (Index i = 0; i < mesh.count(); ++i) acc += mesh.weights[i] * g[i] * g[i];
  return std::sqrt(acc);
}

}  // namespace

SolverReport descend(const Problem& prob, const Objective& objective,
                     const Vec& u0, const SolverOptions& options) {
  const DomainMesh& mesh = *prob.mesh;
  SolverReport rep;
  Vec u = zero_trace(mesh, u0).values;

  std::unique_ptr<StiffnessSolver> stiff;
  if (options.precond == SolverOptions::Precond::Laplacian)
    stiff = std::make_unique<StiffnessSolver>(mesh);

  double energy = objective.energy(u);
  if (!std::isfinite(energy)) throw numeric_error("descent started at non-finite energy");
  if (options.record_trace) rep.energy_trace.push_back(energy);

  double try_step = 1.0;
  int stall = 0;
  Vec g;
  for (rep.iters = 0; rep.iters < options.max_iters; ++rep.iters) {
    g = objective.gradient(u);
    rep.final_grad_norm = weighted_norm(mesh, g);
    if (rep.final_grad_norm <= options.grad_tol) {
      rep.converged = true;
      break;
    }

    Vec dir;
    switch (options.precond) {
      case SolverOptions::Precond::None:
        dir = -g;
        break;
      case SolverOptions::Precond::Diagonal:
        dir = -g.cwiseQuotient(Vec::Ones(mesh.count()) + prob.fields.a);
        break;
      case SolverOptions::Precond::Laplacian:
        dir = -stiff->solve_pairing(mesh.weights.cwiseProduct(g));
        break;
    }
    double slope = 0.0;
    for (Index i = 0; i < mesh.count(); ++i) slope += mesh.weights[i] * g[i] * dir[i];
    if (!(slope < 0.0)) break;

    const double dmax = dir.cwiseAbs().maxCoeff();
    double step = std::min(try_step, dmax > 0.0 ? options.step_cap / dmax : try_step);
    bool accepted = false;
    double cand_energy = energy;
    Vec cand;
    while (step >= 1e-20) {
      cand = u + step * dir;
      cand_energy = objective.energy(cand);
      if (std::isfinite(cand_energy) &&
          cand_energy <= energy + options.armijo_c * step * slope) {
        accepted = true;
        break;
      }
      step *= options.backtrack;
    }
    if (!accepted) break;

    if (energy - cand_energy < 1e-17 * (1.0 + std::abs(energy)))
      ++stall;
    else
      stall = 0;
    u = cand;
    energy = cand_energy;
    if (options.record_trace) rep.energy_trace.push_back(energy);
    try_step = std::min(step * 2.0, options.step_cap);
    if (stall >= 10) break;
  }

  if (!rep.converged) {
    g = objective.gradient(u);
    rep.final_grad_norm = weighted_norm(mesh, g);
    rep.converged = rep.final_grad_norm <= options.grad_tol;
  }
  rep.final_energy = energy;
  rep.final_u = u;
  rep.final_a_integral = a_integral(prob, u);
  rep.reached_negative_level = energy < 0.0;
  return rep;
}

std::vector<Vec> seed_from_eigen_subspace(const DomainMesh& mesh,
                                          const ExponentField& fields,
                                          const Eigen::Vector2d& ball_center,
                                          double ball_radius, int k,
                                          std::vector<double>* eigenvalues) {
  if (k < 1) throw domain_error("eigen subspace needs k >= 1");
  std::vector<Index> nodes;
  for (Index id : nodes_in_ball(mesh, ball_center, ball_radius))
    if (!mesh.boundary[static_cast<std::size_t>(id)]) nodes.push_back(id);
  if (nodes.empty()) throw domain_error("ball contains no interior node");
  const Index n = static_cast<Index>(nodes.size());
  if (k > n)
    throw domain_error("k = " + std::to_string(k) + " exceeds the " +
                       std::to_string(n) + " interior nodes of the ball");

  std::vector<Index> compact(static_cast<std::size_t>(mesh.count()), -1);
  for (Index j = 0; j < n; ++j) compact[static_cast<std::size_t>(nodes[static_cast<std::size_t>(j)])] = j;

  // 3/5-point Dirichlet Laplacian on the node subset; neighbors outside the
  // set are treated as zero.
  Mat lap = Mat::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const Index id = nodes[static_cast<std::size_t>(j)];
    const int ix = static_cast<int>(id % mesh.nodes_per_axis[0]);
    const int iy = static_cast<int>(id / mesh.nodes_per_axis[0]);
    auto neighbor_entry = [&](int nx, int ny, double inv_h2) {
      if (nx < 0 || nx >= mesh.nodes_per_axis[0]) return;
      if (ny < 0 || ny >= mesh.nodes_per_axis[1]) return;
      const Index cj = compact[static_cast<std::size_t>(mesh.node_index(nx, ny))];
      if (cj >= 0) lap(j, cj) -= inv_h2;
    };
    const double ih2x = 1.0 / (mesh.spacing[0] * mesh.spacing[0]);
    lap(j, j) += 2.0 * ih2x;
    neighbor_entry(ix - 1, iy, ih2x);
    neighbor_entry(ix + 1, iy, ih2x);
    if (mesh.dim == 2) {
      const double ih2y = 1.0 / (mesh.spacing[1] * mesh.spacing[1]);
      lap(j, j) += 2.0 * ih2y;
      neighbor_entry(ix, iy - 1, ih2y);
      neighbor_entry(ix, iy + 1, ih2y);
    }
  }

  Eigen::SelfAdjointEigenSolver<Mat> solver(lap);
  if (solver.info() != Eigen::Success)
    throw numeric_error("eigen subspace: eigensolver failed");

  std::vector<Vec> seeds;
  seeds.reserve(static_cast<std::size_t>(k));
  if (eigenvalues) eigenvalues->clear();
  for (int m = 0; m < k; ++m) {
    Vec full = Vec::Zero(mesh.count());
    for (Index j = 0; j < n; ++j)
      full[nodes[static_cast<std::size_t>(j)]] = solver.eigenvectors()(j, m);
    const double norm = x_norm(fields, full);
    if (!(norm > 0.0)) throw numeric_error("eigen seed has zero norm");
    seeds.push_back(full / norm);
    if (eigenvalues) eigenvalues->push_back(solver.eigenvalues()[m]);
  }
  return seeds;
}

namespace {

// Smallest halving of the t1-scale amplitude whose T_lambda level is negative.
Vec negative_level_seed(const Problem& prob, const ParameterLedger& led,
                        double lambda, double t1_pow, const Vec& direction) {
  const double t1v = led.t1(lambda);
  for (int j = 0; j < 60; ++j) {
    const double amp = t1v * std::pow(0.5, j);
    const Vec u0 = amp * direction;
    if (energy_T_lambda(prob, u0, lambda, t1_pow) < 0.0) return u0;
  }
  throw numeric_error("no negative-level seed found along the first eigenfunction");
}

}  // namespace

SolverReport solve_concave_convex(const Problem& prob, const ParameterLedger& led,
                                  double lambda, const SolverOptions& options,
                                  std::uint64_t seed) {
  if (!(lambda > 0.0) || lambda >= led.lambda_star1)
    throw domain_error("solve requires 0 < lambda < lambda_star1");
  const double t1_pow = std::pow(led.t1(lambda), led.p_minus);

  Objective obj{
      [&, lambda, t1_pow](const Vec& u) { return energy_T_lambda(prob, u, lambda, t1_pow); },
      [&, lambda, t1_pow](const Vec& u) { return gradient_T_lambda(prob, u, lambda, t1_pow); }};

  std::vector<Vec> seeds = seed_from_eigen_subspace(
      *prob.mesh, prob.fields, prob.reaction.ball_center, prob.reaction.ball_radius, 1);
  const Vec u0 = negative_level_seed(prob, led, lambda, t1_pow, seeds[0]);

  SolverReport rep = descend(prob, obj, u0, options);
  rep.seed = seed;
  rep.containment_ok = rep.final_a_integral < t1_pow;
  rep.ps_level_ok = rep.final_energy < led.ps_level_cc(lambda);
  if (rep.reached_negative_level && !rep.containment_ok)
    throw verification_error(
        "negative-level iterate escaped the containment region: integral A = " +
        std::to_string(rep.final_a_integral) + " >= " + std::to_string(t1_pow));
  return rep;
}

std::vector<DecayRow> decay_study(const Problem& prob, const ParameterLedger& led,
                                  const std::vector<double>& lambda_grid,
                                  const SolverOptions& options, std::uint64_t seed) {
  std::vector<DecayRow> rows;
  for (double lambda : lambda_grid) {
    DecayRow row;
    row.lambda = lambda;
    row.t1 = led.t1(lambda);
    row.t1_pow = std::pow(row.t1, led.p_minus);
    try {
      const SolverReport rep = solve_concave_convex(prob, led, lambda, options, seed);
      row.norm_u = x_norm(prob.fields, rep.final_u);
      row.a_integral = rep.final_a_integral;
      row.energy = rep.final_energy;
      row.grad_norm = rep.final_grad_norm;
      row.reached_negative_level = rep.reached_negative_level;
      row.containment_ok = rep.containment_ok;
      row.gap = !rep.reached_negative_level;
    } catch (const numeric_error&) {
      row.gap = true;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<SlAuditRow> sl_level_audit(const Problem& prob,
                                       const ParameterLedger& led, double theta,
                                       int k_pairs, const std::vector<double>& r_list,
                                       const SolverOptions& options,
                                       std::uint64_t seed) {
  std::vector<SlAuditRow> rows;
  if (k_pairs <= 0) return rows;
  if (static_cast<int>(r_list.size()) < k_pairs)
    throw config_error("sl audit: r_list must provide one radius bound per k");

  const std::vector<Vec> seeds =
      seed_from_eigen_subspace(*prob.mesh, prob.fields, prob.reaction.ball_center,
                               prob.reaction.ball_radius, k_pairs);

  Objective obj{[&, theta](const Vec& u) { return energy_psi_theta(prob, u, theta); },
                [&, theta](const Vec& u) { return gradient_psi_theta(prob, u, theta); }};
  SolverOptions descent_opts = options;
  descent_opts.max_iters = std::min(options.max_iters, 500);

  constexpr int kAmplitudes = 64;
  constexpr int kCombos = 4;
  double running_level = 0.0;
  Vec running_argmax;

  for (int k = 1; k <= k_pairs; ++k) {
    const double r_cap = r_list[static_cast<std::size_t>(k - 1)];
    if (!(r_cap > 1.0)) throw config_error("sl audit: R_k must exceed 1");

    std::vector<Vec> directions;
    directions.push_back(seeds[static_cast<std::size_t>(k - 1)]);
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(k)));
    for (int c = 0; c < kCombos && k > 1; ++c) {
      Vec combo = Vec::Zero(prob.mesh->count());
      for (int j = 0; j < k; ++j)
        combo += (2.0 * rng.uniform() - 1.0) * seeds[static_cast<std::size_t>(j)];
      const double norm = x_norm(prob.fields, combo);
      if (norm > 0.0) directions.push_back(combo / norm);
    }

    for (const Vec& d : directions) {
      for (int j = 1; j <= kAmplitudes; ++j) {
        const double s = r_cap * j / kAmplitudes;
        const double level = energy_psi_theta(prob, s * d, theta);
        if (level > running_level) {
          running_level = level;
          running_argmax = s * d;
        }
      }
    }

    SlAuditRow row;
    row.k = k;
    row.R = r_cap;
    row.level = running_level;
    row.ps_level = led.ps_level_sl(theta);
    row.c_star = led.c_star(r_cap);
    row.positive = row.level > 0.0;
    row.below_ps = row.level < row.ps_level;
    row.below_c_star = row.level <= row.c_star;
    if (running_argmax.size() > 0) {
      const SolverReport rep = descend(prob, obj, running_argmax, descent_opts);
      row.descent_energy = rep.final_energy;
      row.descent_grad_norm = rep.final_grad_norm;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dplab
