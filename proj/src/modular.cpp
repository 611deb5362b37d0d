#include "dplab/modular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dplab/errors.hpp"

namespace dplab {

namespace {

constexpr double kBisectRelTol = 1e-15;
constexpr int kMaxBracketSteps = 200;

void set_active_extrema(ModularSpec& spec) {
  if (spec.kind == ModularSpec::Kind::WeightedSingle) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    bool any = false;
    for (Index i = 0; i < spec.m.size(); ++i) {
      if (spec.w[i] <= 0.0) continue;
      any = true;
      lo = std::min(lo, spec.m[i]);
      hi = std::max(hi, spec.m[i]);
    }
    if (!any) throw config_error("weighted-single modular has identically zero weight");
    spec.expo_min = lo;
    spec.expo_max = hi;
    return;
  }
  double lo = spec.r.minCoeff();
  double hi = spec.r.maxCoeff();
  for (Index i = 0; i < spec.s.size(); ++i) {
    if (spec.c[i] > 0.0) {
      lo = std::min(lo, spec.s[i]);
      hi = std::max(hi, spec.s[i]);
    }
  }
  spec.expo_min = lo;
  spec.expo_max = hi;
}

double node_value(const ModularSpec& spec, Index i, double t) {
  if (t == 0.0) return 0.0;
  if (spec.kind == ModularSpec::Kind::WeightedSingle)
    return spec.w[i] * std::pow(t, spec.m[i]);
  double v = spec.b[i] * std::pow(t, spec.r[i]);
  if (spec.c[i] > 0.0) v += spec.c[i] * std::pow(t, spec.s[i]);
  return v;
}

bool interior_all_zero(const DomainMesh& mesh, const Vec& u) {
  for (Index i = 0; i < mesh.count(); ++i)
    if (!mesh.boundary[static_cast<std::size_t>(i)] && u[i] != 0.0) return false;
  return true;
}

}  // namespace

ModularSpec single_spec(const DomainMesh& mesh, const Vec& exponent, const Vec& weight) {
  ModularSpec spec;
  spec.kind = ModularSpec::Kind::WeightedSingle;
  spec.mesh = &mesh;
  spec.m = exponent;
  spec.w = weight;
  for (Index i = 0; i < weight.size(); ++i)
    if (weight[i] < 0.0)
      throw config_error("modular weight must be nonnegative (node " +
                         std::to_string(i) + ")");
  set_active_extrema(spec);
  return spec;
}

ModularSpec single_spec(const DomainMesh& mesh, const Vec& exponent) {
  return single_spec(mesh, exponent, Vec::Ones(mesh.count()));
}

ModularSpec two_term_spec(const DomainMesh& mesh, const Vec& b, const Vec& r,
                          const Vec& c, const Vec& s) {
  ModularSpec spec;
  spec.kind = ModularSpec::Kind::TwoTerm;
  spec.mesh = &mesh;
  spec.b = b;
  spec.r = r;
  spec.c = c;
  spec.s = s;
  for (Index i = 0; i < mesh.count(); ++i) {
    if (!(b[i] > 0.0))
      throw config_error("two-term modular requires b(x) > 0 (node " +
                         std::to_string(i) + ")");
    if (c[i] < 0.0)
      throw config_error("two-term modular requires c(x) >= 0 (node " +
                         std::to_string(i) + ")");
    if (c[i] > 0.0 && !(r[i] < s[i]))
      throw config_error("two-term modular requires r(x) < s(x) (node " +
                         std::to_string(i) + ")");
  }
  set_active_extrema(spec);
  return spec;
}

ModularSpec h_spec(const ExponentField& f) {
  return two_term_spec(*f.mesh, Vec::Ones(f.mesh->count()), f.p, f.a, f.q);
}

ModularSpec a_density_spec(const ExponentField& f) {
  return two_term_spec(*f.mesh, f.p.cwiseInverse(), f.p,
                       f.a.cwiseQuotient(f.q), f.q);
}

ModularSpec b_spec(const ExponentField& f) {
  Vec c(f.mesh->count());
  for (Index i = 0; i < c.size(); ++i)
    c[i] = f.c2[i] * (f.a[i] > 0.0 ? std::pow(f.a[i], f.r2[i] / f.q[i]) : 0.0);
  return two_term_spec(*f.mesh, f.c1, f.r1, c, f.r2);
}

ModularSpec gstar_spec(const ExponentField& f) {
  Vec c(f.mesh->count());
  for (Index i = 0; i < c.size(); ++i)
    c[i] = f.a[i] > 0.0 ? std::pow(f.a[i], f.q_star[i] / f.q[i]) : 0.0;
  return two_term_spec(*f.mesh, Vec::Ones(f.mesh->count()), f.p_star, c, f.q_star);
}

double modular(const ModularSpec& spec, const Vec& u) {
  const DomainMesh& mesh = *spec.mesh;
  if (u.size() != mesh.count()) throw data_error("field does not conform to mesh");
  double acc = 0.0;
  for (Index i = 0; i < u.size(); ++i)
    acc += mesh.weights[i] * node_value(spec, i, std::abs(u[i]));
  if (!std::isfinite(acc)) {
    for (Index i = 0; i < u.size(); ++i)
      if (!std::isfinite(node_value(spec, i, std::abs(u[i]))))
        throw range_error("modular overflow at node " + std::to_string(i));
    throw range_error("modular overflow");
  }
  return acc;
}

double luxemburg_norm(const ModularSpec& spec, const Vec& u) {
  const DomainMesh& mesh = *spec.mesh;
  if (u.size() != mesh.count()) throw data_error("field does not conform to mesh");
  if (interior_all_zero(mesh, u)) return 0.0;

  const double rho0 = modular(spec, u);
  if (rho0 == 0.0) return 0.0;

  auto rho_at = [&](double tau) { return modular(spec, u / tau); };

  // Constant-exponent style guess; the true norm lies between
  // rho0^{1/expo_max} and rho0^{1/expo_min} (order depends on rho0 <=> 1).
  double tau = std::pow(rho0, 1.0 / (rho0 >= 1.0 ? spec.expo_min : spec.expo_max));
  if (!(tau > 0.0) || !std::isfinite(tau)) tau = 1.0;

  double lo, hi;  // rho(u/lo) >= 1 >= rho(u/hi)
  double rho_tau = rho_at(tau);
  if (rho_tau >= 1.0) {
    lo = tau;
    hi = tau;
    int steps = 0;
    do {
      hi *= 2.0;
      if (++steps > kMaxBracketSteps)
        throw numeric_error("luxemburg norm: no upper bracket after 200 doublings");
    } while (rho_at(hi) > 1.0);
  } else {
    hi = tau;
    lo = tau;
    int steps = 0;
    do {
      lo *= 0.5;
      if (++steps > kMaxBracketSteps)
        throw numeric_error("luxemburg norm: no lower bracket after 200 halvings");
    } while (rho_at(lo) < 1.0);
  }

  while (hi - lo > kBisectRelTol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (rho_at(mid) >= 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double NormModularReport::worst_margin() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : checks) worst = std::min(worst, c.margin);
  return worst;
}

namespace {

InequalityMargin make_margin(const std::string& name, double lhs, double rhs) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return {name, lhs, rhs, (rhs - lhs) / scale};
}

}  // namespace

NormModularReport check_norm_modular(const ModularSpec& spec, const Vec& u) {
  NormModularReport rep;
  rep.rho = modular(spec, u);
  rep.norm = luxemburg_norm(spec, u);
  const double lo = spec.expo_min, hi = spec.expo_max;
  const double n = rep.norm, rho = rep.rho;

  // Classify on the modular side: rho <=> 1 iff norm <=> 1.
  constexpr double kUnitBand = 1e-12;
  if (std::abs(rho - 1.0) <= kUnitBand) {
    rep.checks.push_back(make_margin("norm == 1 when rho == 1",
                                     std::abs(n - 1.0), 16.0 * kBisectRelTol));
  } else if (rho > 1.0) {
    rep.checks.push_back(make_margin("norm^lo <= rho (norm > 1)", std::pow(n, lo), rho));
    rep.checks.push_back(make_margin("rho <= norm^hi (norm > 1)", rho, std::pow(n, hi)));
  } else if (rho > 0.0) {
    rep.checks.push_back(make_margin("norm^hi <= rho (norm < 1)", std::pow(n, hi), rho));
    rep.checks.push_back(make_margin("rho <= norm^lo (norm < 1)", rho, std::pow(n, lo)));
  } else {
    rep.checks.push_back(make_margin("norm == 0 when rho == 0", n, 0.0));
  }
  // two-sided coarse bound, valid for every u
  rep.checks.push_back(
      make_margin("norm^lo - 1 <= rho", std::pow(n, lo) - 1.0, rho));
  rep.checks.push_back(
      make_margin("rho <= norm^hi + 1", rho, std::pow(n, hi) + 1.0));
  return rep;
}

HolderPair holder_pairing(const DomainMesh& mesh, const Vec& u, const Vec& v,
                          const Vec& m, const Vec& weight) {
  Vec m_conj(m.size());
  for (Index i = 0; i < m.size(); ++i) {
    if (!(m[i] > 1.0))
      throw domain_error("Hoelder exponent must exceed 1 (node " +
                         std::to_string(i) + ")");
    m_conj[i] = m[i] / (m[i] - 1.0);
  }
  HolderPair out;
  out.lhs = std::abs(integrate(mesh, weight.cwiseProduct(u.cwiseProduct(v))));
  const ModularSpec su = single_spec(mesh, m, weight);
  const ModularSpec sv = single_spec(mesh, m_conj, weight);
  out.rhs = 2.0 * luxemburg_norm(su, u) * luxemburg_norm(sv, v);
  return out;
}

YoungTriple young_check(double a, double b, double eps, double m) {
  if (!(m > 1.0)) throw domain_error("Young exponent must exceed 1");
  if (a < 0.0 || b < 0.0 || !(eps > 0.0))
    throw domain_error("Young check requires a,b >= 0 and eps > 0");
  const double conj = m / (m - 1.0);
  YoungTriple t;
  t.lhs = a * b;
  t.mid = (1.0 / m) * eps * std::pow(a, m) +
          ((m - 1.0) / m) * std::pow(eps, -1.0 / (m - 1.0)) * std::pow(b, conj);
  t.rhs = eps * std::pow(a, m) +
          (1.0 + std::pow(eps, -1.0 / (m - 1.0))) * std::pow(b, conj);
  return t;
}

double x_norm(const ExponentField& f, const Vec& u) {
  return luxemburg_norm(h_spec(f), gradient_magnitude(*f.mesh, u));
}

std::vector<double> brezis_lieb_deviation(const ModularSpec& spec,
                                          const std::vector<Vec>& f_seq,
                                          const Vec& f) {
  const DomainMesh& mesh = *spec.mesh;
  std::vector<double> out;
  out.reserve(f_seq.size());
  for (const Vec& fn : f_seq) {
    double acc = 0.0;
    for (Index i = 0; i < mesh.count(); ++i) {
      const double dev = node_value(spec, i, std::abs(fn[i])) -
                         node_value(spec, i, std::abs(fn[i] - f[i])) -
                         node_value(spec, i, std::abs(f[i]));
      acc += mesh.weights[i] * std::abs(dev);
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace dplab
