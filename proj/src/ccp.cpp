#include "dplab/ccp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dplab/energy.hpp"
#include "dplab/errors.hpp"
#include "dplab/modular.hpp"

namespace dplab {

double bubble_profile(double rho) { return smoothstep_cutoff(rho, 0.5).value; }

BubbleFamily make_bubbles(const DomainMesh& mesh, const Eigen::Vector2d& x0,
                          const std::vector<double>& eps_list, double s) {
  if (s < 0.0) throw domain_error("bubble amplitude exponent must be >= 0");
  BubbleFamily fam;
  fam.mesh = &mesh;
  fam.center = x0;
  fam.amplitude_exponent = s;

  const double hmax = mesh.dim == 2 ? std::max(mesh.spacing[0], mesh.spacing[1])
                                    : mesh.spacing[0];
  for (double eps : eps_list) {
    if (eps < 4.0 * hmax)
      throw resource_error("bubble at eps = " + std::to_string(eps) +
                           " is unresolvable on spacing " + std::to_string(hmax));
    for (int k = 0; k < mesh.dim; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      if (x0[k] - eps < mesh.lo[ks] || x0[k] + eps > mesh.hi[ks])
        throw domain_error("bubble support at eps = " + std::to_string(eps) +
                           " does not fit inside the domain");
    }
    const double amp = std::pow(eps, -s);
    Vec u(mesh.count());
    for (Index i = 0; i < mesh.count(); ++i) {
      double d2 = 0.0;
      for (int k = 0; k < mesh.dim; ++k) {
        const double d = mesh.coords(i, k) - x0[k];
        d2 += d * d;
      }
      u[i] = amp * bubble_profile(std::sqrt(d2) / eps);
    }
    fam.eps.push_back(eps);
    fam.fields.push_back(zero_trace(mesh, u).values);
  }
  return fam;
}

namespace {

double ball_mass(const DomainMesh& mesh, const Vec& density,
                 const Eigen::Vector2d& x0, double radius) {
  double acc = 0.0;
  for (Index id : nodes_in_ball(mesh, x0, radius))
    acc += mesh.weights[id] * density[id];
  return acc;
}

Vec h_density(const ExponentField& f, const Vec& magnitude) {
  Vec out = Vec::Zero(magnitude.size());
  for (Index i = 0; i < magnitude.size(); ++i) {
    const double t = magnitude[i];
    if (t == 0.0) continue;
    out[i] = std::pow(t, f.p[i]) + f.a[i] * std::pow(t, f.q[i]);
  }
  return out;
}

Vec b_density(const ExponentField& f, const Vec& u) {
  Vec out = Vec::Zero(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    const double t = std::abs(u[i]);
    if (t == 0.0) continue;
    const double aw = f.a[i] > 0.0 ? std::pow(f.a[i], f.r2[i] / f.q[i]) : 0.0;
    out[i] = f.c1[i] * std::pow(t, f.r1[i]) + f.c2[i] * aw * std::pow(t, f.r2[i]);
  }
  return out;
}

// Value of a field at the node nearest to x0.
Index nearest_node(const DomainMesh& mesh, const Eigen::Vector2d& x0) {
  Index best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < mesh.count(); ++i) {
    double d2 = 0.0;
    for (int k = 0; k < mesh.dim; ++k) {
      const double d = mesh.coords(i, k) - x0[k];
      d2 += d * d;
    }
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

}  // namespace

std::vector<ConcentrationRow> ccp_quotient_trace(const BubbleFamily& family,
                                                 const ExponentField& fields,
                                                 const ParameterLedger& led) {
  const DomainMesh& mesh = *family.mesh;
  const Index center_node = nearest_node(mesh, family.center);
  const double p0 = fields.p[center_node];
  const double q0 = fields.q[center_node];
  const double ps0 = fields.p_star[center_node];
  const double qs0 = fields.q_star[center_node];
  const ModularSpec hs = h_spec(fields);

  std::vector<ConcentrationRow> rows;
  for (std::size_t n = 0; n < family.eps.size(); ++n) {
    const double eps = family.eps[n];
    const Vec& u = family.fields[n];
    ConcentrationRow row;
    row.eps = eps;

    const Vec hdens = h_density(fields, gradient_magnitude(mesh, u));
    const Vec bdens = b_density(fields, u);
    row.mu_mass = ball_mass(mesh, hdens, family.center, eps);
    row.nu_mass = ball_mass(mesh, bdens, family.center, eps);
    row.nu_half_mass = ball_mass(mesh, bdens, family.center, 0.5 * eps);

    auto power_min = [](double base, double e1, double e2) {
      if (base == 0.0) return 0.0;
      return std::min(std::pow(base, 1.0 / e1), std::pow(base, 1.0 / e2));
    };
    auto power_max = [](double base, double e1, double e2) {
      if (base == 0.0) return 0.0;
      return std::max(std::pow(base, 1.0 / e1), std::pow(base, 1.0 / e2));
    };

    row.lhs = led.s_hat * power_min(row.nu_mass, ps0, qs0);
    row.rhs = power_max(row.mu_mass, p0, q0);
    row.margin = row.rhs - row.lhs;

    const auto [r1_lo, r1_hi] = local_extrema_over_ball(mesh, fields.r1, family.center, eps);
    const auto [r2_lo, r2_hi] = local_extrema_over_ball(mesh, fields.r2, family.center, eps);
    const auto [p_lo, p_hi] = local_extrema_over_ball(mesh, fields.p, family.center, eps);
    const auto [q_lo, q_hi] = local_extrema_over_ball(mesh, fields.q, family.center, eps);
    (void)r1_hi;
    (void)r2_lo;
    (void)p_hi;
    (void)q_lo;
    row.local_lhs = led.s_hat * power_min(row.nu_half_mass, r1_lo, r2_hi);
    row.local_rhs = power_max(row.mu_mass, p_lo, q_hi);

    // correction term ||u grad phi_eps||_H for the pure-bubble case u = 0
    row.correction = luxemburg_norm(hs, Vec::Zero(mesh.count()));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dplab
