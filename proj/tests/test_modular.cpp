#include <doctest.h>

#include <cmath>

#include "dplab/errors.hpp"
#include "dplab/modular.hpp"
#include "dplab/rng.hpp"
#include "helpers.hpp"

using namespace dplab;

namespace {

ModularSpec h_like(const DomainMesh& mesh, double p, double q, double a) {
  return two_term_spec(mesh, Vec::Ones(mesh.count()), Vec::Constant(mesh.count(), p),
                       Vec::Constant(mesh.count(), a), Vec::Constant(mesh.count(), q));
}

}  // namespace

TEST_CASE("modular closed forms on the unit box") {
  const DomainMesh mesh = build_mesh_1d(0.0, 1.0, 65);

  // p = 2, a = 0, u = 1: integral of 1
  CHECK(modular(h_like(mesh, 2.0, 3.0, 0.0), Vec::Ones(mesh.count())) ==
        doctest::Approx(1.0).epsilon(1e-13));
  // p = 2, q = 3, a = 1, u = 2: 4 + 8
  CHECK(modular(h_like(mesh, 2.0, 3.0, 1.0), Vec::Constant(mesh.count(), 2.0)) ==
        doctest::Approx(12.0).epsilon(1e-13));

  // B-like single power r1 = 4 against the exact integral of x^4
  Vec x(mesh.count());
  for (Index i = 0; i < mesh.count(); ++i) x[i] = mesh.coords(i, 0);
  const ModularSpec b4 = two_term_spec(mesh, Vec::Ones(mesh.count()),
                                       Vec::Constant(mesh.count(), 4.0),
                                       Vec::Zero(mesh.count()),
                                       Vec::Constant(mesh.count(), 5.0));
  CHECK(std::abs(modular(b4, x) - 0.2) <= 1e-4);
}

TEST_CASE("modular overflow names a node") {
  const DomainMesh mesh = build_mesh_1d(0.0, 1.0, 9);
  Vec u = Vec::Ones(mesh.count());
  u[4] = 1e300;
  CHECK_THROWS_AS(modular(h_like(mesh, 2.0, 4.0, 1.0), u), range_error);
}

TEST_CASE("luxemburg norm: constant-exponent closed form") {
  const DomainMesh mesh = build_mesh_1d(0.0, 1.0, 65);
  const ModularSpec p2 = h_like(mesh, 2.0, 3.0, 0.0);
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec u = smooth_random_field(mesh, rng, std::pow(10.0, rng.uniform(-2.0, 2.0)));
    const double closed = std::sqrt(modular(p2, u));
    if (closed == 0.0) continue;
    CHECK(std::abs(luxemburg_norm(p2, u) - closed) / closed <= 1e-9);
  }
  CHECK(luxemburg_norm(p2, Vec::Zero(mesh.count())) == 0.0);
}

TEST_CASE("luxemburg norm: two-phase constant closed form") {
  // p = 2, q = 4, a = 1, u = c: solves (c/tau)^2 + (c/tau)^4 = 1,
  // tau = c sqrt((1+sqrt 5)/2)
  const DomainMesh mesh = build_mesh_1d(0.0, 1.0, 65);
  const ModularSpec spec = h_like(mesh, 2.0, 4.0, 1.0);
  const double factor = std::sqrt(0.5 * (1.0 + std::sqrt(5.0)));
  CHECK(factor == doctest::Approx(1.27201965).epsilon(1e-8));
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = std::pow(10.0, rng.uniform(-3.0, 3.0));
    const double norm = luxemburg_norm(spec, Vec::Constant(mesh.count(), c));
    CHECK(std::abs(norm - factor * c) / (factor * c) <= 1e-9);
  }
}

TEST_CASE("boundary-only data counts as zero by the trace convention") {
  const DomainMesh mesh = build_mesh_1d(0.0, 1.0, 9);
  Vec u = Vec::Zero(mesh.count());
  u[0] = 3.0;
  u[mesh.count() - 1] = -2.0;
  CHECK(luxemburg_norm(h_like(mesh, 2.0, 3.0, 1.0), u) == 0.0);
}

TEST_CASE("norm-modular sandwich: unit sphere and both branches") {
  const DomainMesh mesh = build_mesh_1d(0.0, 1.0, 65);
  const ModularSpec spec = h_like(mesh, 2.0, 4.0, 1.0);
  Rng rng(29);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec u = smooth_random_field(mesh, rng, std::pow(10.0, rng.uniform(-2.0, 2.0)));
    const NormModularReport rep = check_norm_modular(spec, u);
    CHECK(rep.worst_margin() >= -1e-12);
  }
  // exact unit-modular case
  Vec u = smooth_random_field(mesh, rng, 1.0);
  const double n0 = luxemburg_norm(spec, u);
  REQUIRE(n0 > 0.0);
  u /= n0;
  CHECK(std::abs(modular(spec, u) - 1.0) <= 1e-12);
}

TEST_CASE("hoelder pairing") {
  const DomainMesh mesh = build_mesh_1d(0.0, 1.0, 65);
  const Vec m = Vec::Constant(mesh.count(), 2.0);
  const Vec w = Vec::Ones(mesh.count());

  SUBCASE("zero factor gives the zero pair") {
    Rng rng(5);
    const Vec u = smooth_random_field(mesh, rng, 1.0);
    const HolderPair pair = holder_pairing(mesh, u, Vec::Zero(mesh.count()), m, w);
    CHECK(pair.lhs == 0.0);
    CHECK(pair.rhs == 0.0);
  }
  SUBCASE("u = v exhibits the factor-2 slack of the pairing bound") {
    Rng rng(6);
    const Vec u = smooth_random_field(mesh, rng, 1.0);
    const HolderPair pair = holder_pairing(mesh, u, u, m, w);
    CHECK(pair.lhs == doctest::Approx(0.5 * pair.rhs).epsilon(1e-8));
  }
  SUBCASE("random sweep has no violations") {
    Rng rng(7);
    for (int trial = 0; trial < 500; ++trial) {
      const Vec u = smooth_random_field(mesh, rng, std::pow(10.0, rng.uniform(-1.0, 1.0)));
      const Vec v = smooth_random_field(mesh, rng, std::pow(10.0, rng.uniform(-1.0, 1.0)));
      Vec mv(mesh.count());
      for (Index i = 0; i < mesh.count(); ++i)
        mv[i] = rng.uniform(1.2, 4.0);
      const HolderPair pair = holder_pairing(mesh, u, v, Vec::Constant(mesh.count(), 2.5), w);
      CHECK(pair.lhs <= pair.rhs + 1e-12);
      (void)mv;
    }
  }
  SUBCASE("exponent at most one is rejected") {
    CHECK_THROWS_AS(holder_pairing(mesh, w, w, Vec::Ones(mesh.count()), w), domain_error);
  }
}

TEST_CASE("young inequality triple") {
  CHECK(young_check(0.0, 2.0, 1.0, 2.0).lhs == 0.0);
  const YoungTriple t = young_check(1.0, 1.0, 1.0, 2.0);
  CHECK(t.lhs == doctest::Approx(1.0));
  CHECK(t.mid == doctest::Approx(1.0));
  CHECK(t.rhs == doctest::Approx(3.0));

  Rng rng(31);
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = std::pow(10.0, rng.uniform(-3.0, 1.0));
    const double b = std::pow(10.0, rng.uniform(-3.0, 1.0));
    const double eps = std::pow(10.0, rng.uniform(-2.0, 0.7));
    const double m = 1.0 + std::pow(10.0, rng.uniform(-1.0, 0.7));
    const YoungTriple y = young_check(a, b, eps, m);
    const double scale = std::max({1.0, y.lhs, y.mid, y.rhs});
    CHECK((y.mid - y.lhs) / scale >= -1e-12);
    CHECK((y.rhs - y.mid) / scale >= -1e-12);
  }
  CHECK_THROWS_AS(young_check(1.0, 1.0, 1.0, 1.0), domain_error);
}

TEST_CASE("brezis-lieb deviations") {
  auto lab = testing::cc_lab(65);
  const ModularSpec spec = b_spec(lab->problem.fields);
  const DomainMesh& mesh = lab->mesh;
  Rng rng(37);
  const Vec f = zero_trace(mesh, smooth_random_field(mesh, rng, 1.0)).values;
  const Vec g = zero_trace(mesh, smooth_random_field(mesh, rng, 1.0)).values;

  SUBCASE("identical sequence deviates by zero") {
    const std::vector<Vec> seq{f, f, f};
    for (double d : brezis_lieb_deviation(spec, seq, f)) CHECK(d == 0.0);
  }
  SUBCASE("1/n perturbation decays below 1e-6") {
    std::vector<Vec> seq;
    for (int j = 0; j <= 30; ++j) seq.push_back(f + g / std::pow(2.0, j));
    const auto dev = brezis_lieb_deviation(spec, seq, f);
    for (std::size_t j = 4; j < dev.size(); ++j) CHECK(dev[j] <= dev[j - 1] + 1e-15);
    CHECK(dev.back() < 1e-6);
  }
  SUBCASE("translating bump against the zero limit deviates by zero") {
    std::vector<Vec> seq;
    for (int j = 0; j < 5; ++j) {
      Vec bump = Vec::Zero(mesh.count());
      bump[10 + 5 * j] = 1.0;
      seq.push_back(zero_trace(mesh, bump).values);
    }
    for (double d : brezis_lieb_deviation(spec, seq, Vec::Zero(mesh.count())))
      CHECK(d == 0.0);
  }
}

TEST_CASE("gauge norm properties: homogeneity, triangle, monotonicity") {
  const DomainMesh mesh = build_mesh_1d(0.0, 1.0, 65);
  const ModularSpec spec = h_like(mesh, 2.0, 2.4, 1.0);
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec u = smooth_random_field(mesh, rng, std::pow(10.0, rng.uniform(-1.5, 1.5)));
    const Vec v = smooth_random_field(mesh, rng, std::pow(10.0, rng.uniform(-1.5, 1.5)));
    const double c = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::pow(10.0, rng.uniform(-2.0, 2.0));
    const double nu = luxemburg_norm(spec, u), nv = luxemburg_norm(spec, v);
    if (nu > 0.0)
      CHECK(std::abs(luxemburg_norm(spec, c * u) - std::abs(c) * nu) / (std::abs(c) * nu) <= 1e-9);
    CHECK(luxemburg_norm(spec, u + v) <= nu + nv + 1e-9 * (1.0 + nu + nv));

    Vec dom(mesh.count());
    for (Index i = 0; i < mesh.count(); ++i)
      dom[i] = u[i] == 0.0 ? std::abs(v[i]) : u[i] * (1.0 + 0.2 * std::abs(v[i]));
    CHECK(modular(spec, u) <= modular(spec, dom) + 1e-14);
    CHECK(luxemburg_norm(spec, u) <= luxemburg_norm(spec, dom) + 1e-12);
  }
}

TEST_CASE("vanishing modular forces vanishing norm") {
  const DomainMesh mesh = build_mesh_1d(0.0, 1.0, 65);
  const ModularSpec spec = h_like(mesh, 2.0, 2.4, 1.0);
  Rng rng(43);
  const Vec u = smooth_random_field(mesh, rng, 1.0);
  double prev_norm = luxemburg_norm(spec, u);
  for (int n = 1; n <= 16; ++n) {
    const Vec un = u / std::pow(2.0, n);
    CHECK(modular(spec, un) <= modular(spec, u / std::pow(2.0, n - 1)));
    const double norm = luxemburg_norm(spec, un);
    CHECK(norm <= prev_norm);
    prev_norm = norm;
  }
  CHECK(prev_norm < 1e-4 * luxemburg_norm(spec, u));
}

TEST_CASE("spec constructors enforce the two-term ordering") {
  const DomainMesh mesh = build_mesh_1d(0.0, 1.0, 9);
  const Index n = mesh.count();
  CHECK_THROWS_AS(two_term_spec(mesh, Vec::Ones(n), Vec::Constant(n, 3.0),
                                Vec::Ones(n), Vec::Constant(n, 2.0)),
                  config_error);
  CHECK_THROWS_AS(two_term_spec(mesh, Vec::Zero(n), Vec::Constant(n, 2.0),
                                Vec::Ones(n), Vec::Constant(n, 3.0)),
                  config_error);
}
