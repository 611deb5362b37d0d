#include "dplab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dplab/errors.hpp"

namespace dplab {

namespace {

constexpr double kEqTol = 1e-10;  // relative tolerance for exact identities

void require_finite(const Vec& f, const char* name) {
  for (Index i = 0; i < f.size(); ++i)
    if (!std::isfinite(f[i]))
      throw data_error(std::string("non-finite value in field '") + name +
                       "' at node " + std::to_string(i));
}

// Tracks the worst (most negative) margin of a pointwise condition.
struct WorstTracker {
  double margin = std::numeric_limits<double>::infinity();
  Index node = -1;
  double value = 0.0;
  void update(double m, Index i, double v) {
    if (m < margin) {
      margin = m;
      node = i;
      value = v;
    }
  }
  void report(std::vector<Violation>& out, const std::string& condition) const {
    if (margin < 0.0) out.push_back({condition, node, value, margin});
  }
};

double max_fd_slope(const DomainMesh& mesh, const Vec& f) {
  double s = 0.0;
  const Mat g = gradient(mesh, f);
  for (Index i = 0; i < mesh.count(); ++i) s = std::max(s, g.row(i).norm());
  return s;
}

}  // namespace

void ExponentField::attach_reaction_exponents(const Vec& alpha_field,
                                              const Vec& sigma_field) {
  alpha = alpha_field;
  sigma = sigma_field;
  refresh_extrema();
}

void ExponentField::refresh_extrema() {
  p_min = p.minCoeff();
  p_max = p.maxCoeff();
  q_min = q.minCoeff();
  q_max = q.maxCoeff();
  r1_min = r1.minCoeff();
  r2_max = r2.maxCoeff();
  if (sigma.size() > 0) {
    sigma_min = sigma.minCoeff();
    sigma_max = sigma.maxCoeff();
  }
  if (alpha.size() > 0) alpha_max = alpha.maxCoeff();
}

ExponentField make_exponent_field(const DomainMesh& mesh, int ambient_n,
                                  const Vec& p, const Vec& q, const Vec& a,
                                  const Vec& c1, const Vec& c2, const Vec& r1,
                                  bool flag_critical) {
  ExponentField f;
  f.mesh = &mesh;
  f.ambient_n = ambient_n;
  f.flag_critical = flag_critical;
  f.p = p;
  f.q = q;
  f.a = a;
  f.c1 = c1;
  f.c2 = c2;
  f.r1 = r1;
  require_finite(p, "p");
  require_finite(q, "q");
  require_finite(a, "a");
  require_finite(c1, "c1");
  require_finite(c2, "c2");
  require_finite(r1, "r1");
  f.p_star = critical_exponent(p, ambient_n);
  f.q_star = critical_exponent(q, ambient_n);
  f.r2 = f.q_star - f.p_star + r1;  // so p* - r1 == q* - r2 exactly
  for (Index i = 0; i < mesh.count(); ++i)
    if (std::abs(f.r1[i] - f.p_star[i]) <= kEqTol * std::abs(f.p_star[i]))
      f.critical_set.push_back(i);
  f.refresh_extrema();
  return f;
}

Vec critical_exponent(const Vec& h, int ambient_n) {
  const double n = static_cast<double>(ambient_n);
  Vec out(h.size());
  for (Index i = 0; i < h.size(); ++i) {
    if (!(h[i] < n))
      throw domain_error("critical exponent undefined: h(x) >= N at node " +
                         std::to_string(i));
    out[i] = n * h[i] / (n - h[i]);
  }
  return out;
}

ValidationReport validate_hypotheses(const ExponentField& f) {
  const DomainMesh& mesh = *f.mesh;
  if (mesh.count() < 2) throw domain_error("mesh must have at least 2 nodes per axis");
  const double n = static_cast<double>(f.ambient_n);

  ValidationReport rep;
  WorstTracker a_nonneg, p_gt1, p_lt_q, q_lt_n, ratio, c1_pos, c2_nonneg,
      q_lt_r1, r1_le_pstar, gap_identity;
  for (Index i = 0; i < mesh.count(); ++i) {
    a_nonneg.update(f.a[i], i, f.a[i]);
    p_gt1.update(f.p[i] - 1.0, i, f.p[i]);
    p_lt_q.update(f.q[i] - f.p[i], i, f.p[i]);
    q_lt_n.update(n - f.q[i], i, f.q[i]);
    ratio.update(1.0 + 1.0 / n - f.q[i] / f.p[i], i, f.q[i] / f.p[i]);
    c1_pos.update(f.c1[i], i, f.c1[i]);
    c2_nonneg.update(f.c2[i], i, f.c2[i]);
    q_lt_r1.update(f.r1[i] - f.q[i], i, f.r1[i]);
    r1_le_pstar.update(f.p_star[i] - f.r1[i] + kEqTol, i, f.r1[i]);
    const double gap = std::abs((f.p_star[i] - f.r1[i]) - (f.q_star[i] - f.r2[i]));
    gap_identity.update(kEqTol * std::max(1.0, std::abs(f.p_star[i])) - gap, i, gap);
  }
  a_nonneg.report(rep.violations, "a(x) >= 0");
  p_gt1.report(rep.violations, "p(x) > 1");
  p_lt_q.report(rep.violations, "p(x) < q(x)");
  q_lt_n.report(rep.violations, "q(x) < N");
  ratio.report(rep.violations, "q(x)/p(x) < 1 + 1/N");
  c1_pos.report(rep.violations, "c1(x) > 0");
  c2_nonneg.report(rep.violations, "c2(x) >= 0");
  q_lt_r1.report(rep.violations, "q(x) < r1(x)");
  r1_le_pstar.report(rep.violations, "r1(x) <= p*(x)");
  gap_identity.report(rep.violations, "p*(x) - r1(x) == q*(x) - r2(x)");

  // strictness of the open inequalities (> vs >=)
  if (a_nonneg.margin >= 0 && p_gt1.margin == 0)
    rep.violations.push_back({"p(x) > 1 (strict)", p_gt1.node, p_gt1.value, 0.0});
  if (p_lt_q.margin == 0)
    rep.violations.push_back({"p(x) < q(x) (strict)", p_lt_q.node, p_lt_q.value, 0.0});
  if (c1_pos.margin == 0)
    rep.violations.push_back({"c1(x) > 0 (strict)", c1_pos.node, c1_pos.value, 0.0});

  if (f.flag_critical && f.critical_set.empty())
    rep.violations.push_back({"critical set nonempty", -1, 0.0, -1.0});

  // cached extrema must match the tables
  ExponentField copy = f;
  copy.refresh_extrema();
  if (copy.p_min != f.p_min || copy.p_max != f.p_max || copy.q_min != f.q_min ||
      copy.q_max != f.q_max || copy.r1_min != f.r1_min || copy.r2_max != f.r2_max)
    rep.violations.push_back({"cached extrema match tables", -1, 0.0, -1.0});

  rep.lipschitz_slope_p = max_fd_slope(mesh, f.p);
  rep.lipschitz_slope_q = max_fd_slope(mesh, f.q);
  rep.lipschitz_slope_a = max_fd_slope(mesh, f.a);
  return rep;
}

std::pair<double, double> local_extrema_over_ball(const DomainMesh& mesh,
                                                  const Vec& h,
                                                  const Eigen::Vector2d& x0,
                                                  double eps) {
  if (!(eps > 0.0)) throw domain_error("ball radius must be positive");
  for (int k = 0; k < mesh.dim; ++k)
    if (x0[k] < mesh.lo[static_cast<std::size_t>(k)] ||
        x0[k] > mesh.hi[static_cast<std::size_t>(k)])
      throw domain_error("ball center outside the closed domain");
  const std::vector<Index> ids = nodes_in_ball(mesh, x0, eps);
  if (ids.empty()) throw numeric_error("degenerate ball: no node within eps of x0");
  double lo = h[ids[0]], hi = h[ids[0]];
  for (Index id : ids) {
    lo = std::min(lo, h[id]);
    hi = std::max(hi, h[id]);
  }
  return {lo, hi};
}

}  // namespace dplab
