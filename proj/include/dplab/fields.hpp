#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dplab/mesh.hpp"

namespace dplab {

// All variable exponents and weights of the problem as nodal tables, sampled
// once from closed-form descriptors; downstream modules consume tables only.
struct ExponentField {
  const DomainMesh* mesh = nullptr;
  int ambient_n = 1;  // dimension used by the hypotheses and by h -> h*
  bool flag_critical = true;

  Vec p, q, a;       // principal exponents and modulating weight
  Vec c1, c2, r1, r2;  // critical-term data, r2 = q* - p* + r1 by construction
  Vec p_star, q_star;
  Vec alpha, sigma;  // reaction exponents (empty until a reaction is attached)

  // cached extrema
  double p_min = 0, p_max = 0, q_min = 0, q_max = 0;
  double r1_min = 0, r2_max = 0;
  double sigma_min = 0, sigma_max = 0, alpha_max = 0;

  std::vector<Index> critical_set;  // nodes with r1 == p* (1e-10 relative)

  void attach_reaction_exponents(const Vec& alpha_field, const Vec& sigma_field);
  void refresh_extrema();
};

ExponentField make_exponent_field(const DomainMesh& mesh, int ambient_n,
                                  const Vec& p, const Vec& q, const Vec& a,
                                  const Vec& c1, const Vec& c2, const Vec& r1,
                                  bool flag_critical = true);

// h*(x) = N h(x) / (N - h(x)); throws domain_error where h >= N.
Vec critical_exponent(const Vec& h, int ambient_n);

struct Violation {
  std::string condition;
  Index worst_node = -1;
  double worst_value = 0.0;
  double margin = 0.0;  // negative means violated by |margin|
};

struct ValidationReport {
  std::vector<Violation> violations;
  double lipschitz_slope_p = 0.0;  // informational only, never enforced
  double lipschitz_slope_q = 0.0;
  double lipschitz_slope_a = 0.0;
  bool ok() const { return violations.empty(); }
};

// Checks every pointwise hypothesis on the sampled tables and reports each
// violated condition with its worst-offending node. Non-finite data throws
// data_error naming the field and node. Pure: identical input, identical
// report.
ValidationReport validate_hypotheses(const ExponentField& fields);

// (inf, sup) of h over mesh nodes within distance eps of x0.
std::pair<double, double> local_extrema_over_ball(const DomainMesh& mesh,
                                                  const Vec& h,
                                                  const Eigen::Vector2d& x0,
                                                  double eps);

}  // namespace dplab
