#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dplab/energy.hpp"
#include "dplab/ledger.hpp"
#include "dplab/search.hpp"

namespace dplab {

// Closed-form scalar field descriptor. Nodal tables are sampled from these
// exactly once, at problem construction.
struct FieldDesc {
  enum class Kind { Const, Affine, PStar, PStarMinus };
  Kind kind = Kind::Const;
  double c0 = 0.0, cx = 0.0, cy = 0.0;  // affine: c0 + cx x1 + cy x2
  double gap = 0.0;                     // pstar_minus: p*(x) - gap
};

struct RunConfig {
  // [mesh]
  int dim = 1;
  std::array<double, 2> box_lo{0.0, 0.0};
  std::array<double, 2> box_hi{1.0, 1.0};
  std::array<int, 2> nodes{257, 1};
  int ambient_n = 0;  // 0 means "mesh dimension"

  // [fields]
  FieldDesc p, q, a, c1, c2;
  FieldDesc r1{FieldDesc::Kind::PStar, 0, 0, 0, 0};
  bool flag_critical = true;

  // [kirchhoff]
  KirchhoffSpec::Kind kirchhoff_kind = KirchhoffSpec::Kind::Constant;
  double m0 = 1.0, kirchhoff_kappa = 0.0, tau0 = 1.0;

  // [reaction]
  ReactionSpec::Family family = ReactionSpec::Family::ConcaveConvex;
  ReactionSpec::Entry entry = ReactionSpec::Entry::Power;
  double coef1 = 1.0, coef2 = 0.0;
  FieldDesc delta{FieldDesc::Kind::Const, 1.5, 0, 0, 0};
  FieldDesc m_exp{FieldDesc::Kind::Const, 0, 0, 0, 0};  // c0 == 0: default p
  FieldDesc kappa_exp{FieldDesc::Kind::Const, 1.5, 0, 0, 0};
  Eigen::Vector2d ball_center{0.5, 0.5};
  double ball_radius = 0.25;
  Eigen::Vector2d cutoff_center{0.5, 0.5};
  double cutoff_radius = 0.1;
  double beta = 0.0;  // 0 means q^+

  // [scenario]
  std::string scenario = "validate";
  double lambda = -1.0;  // < 0 means lambda_star / 2
  double theta = -1.0;   // < 0 means theta1(R_max) / 2
  std::vector<double> lambda_fractions{0.5, 0.25, 0.125, 0.0625};
  int k_pairs = 3;
  std::vector<double> r_list{2.0, 3.0, 4.0};
  std::vector<double> eps_list{0.25, 0.125, 0.0625};
  double bubble_s = -1.0;  // < 0 means (N - p(x0)) / p(x0)
  Eigen::Vector2d bubble_center{0.5, 0.5};
  std::vector<std::string> suites{"inequalities", "gradients", "ledger", "solver", "ccp"};
  int samples = 10000;
  std::uint64_t seed = 42;

  // [solver]
  SolverOptions solver;

  // [ledger]
  LedgerOptions ledger;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// The mesh/problem bundle with stable addresses (the problem holds internal
// pointers, so the pack is non-copyable).
struct Lab {
  DomainMesh mesh;
  Problem problem;
  Lab() = default;
  Lab(const Lab&) = delete;
  Lab& operator=(const Lab&) = delete;
};

std::unique_ptr<Lab> build_lab(const RunConfig& cfg);

Vec sample_field(const FieldDesc& desc, const DomainMesh& mesh);

}  // namespace dplab
