#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <cstdint>
#include <vector>

#include "dplab/rng.hpp"

namespace dplab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

// Uniform tensor-product grid over a box, dim in {1,2}. Quadrature is the
// trapezoid rule; first derivatives are central inside and one-sided on the
// box surface, so they are exact for affine nodal data at interior nodes.
struct DomainMesh {
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
  std::array<int, 2> nodes_per_axis{3, 1};
  std::array<double, 2> spacing{0.0, 0.0};

  Vec weights;                 // trapezoid weights, sum == box volume
  std::vector<char> boundary;  // 1 on the box surface
  Mat coords;                  // count x dim
  std::array<Eigen::SparseMatrix<double>, 2> diff;  // d/dx_k stencils

  Index count() const { return weights.size(); }
  double volume() const;
  Index node_index(int i, int j = 0) const {
    return static_cast<Index>(i) + static_cast<Index>(nodes_per_axis[0]) * j;
  }
};

inline constexpr Index kDefaultNodeCap = Index(1) << 22;

DomainMesh build_mesh(const std::array<double, 2>& lo,
                      const std::array<double, 2>& hi,
                      const std::array<int, 2>& nodes_per_axis, int dim,
                      Index node_cap = kDefaultNodeCap);
DomainMesh build_mesh_1d(double a, double b, int nodes,
                         Index node_cap = kDefaultNodeCap);

// Nodal partial derivatives, count x dim.
Mat gradient(const DomainMesh& mesh, const Vec& u);
Vec gradient_magnitude(const DomainMesh& mesh, const Vec& u);

// Quadrature-weighted sum. Throws data_error (with the node index) on
// non-finite entries.
double integrate(const DomainMesh& mesh, const Vec& f);

// Adjoint of the gradient stencil applied to a weighted flux:
// returns r with r_j = sum_k (D_k^T (w .* flux_k))_j, i.e. the raw pairing
// vector such that r . v == integrate(flux . grad v) for every nodal v.
Vec divergence_adjoint(const DomainMesh& mesh, const Mat& flux);

struct GridFunction {
  const DomainMesh* mesh = nullptr;
  Vec values;
};

// Zero-trace projection: copies values and forces boundary nodes to 0.
GridFunction zero_trace(const DomainMesh& mesh, const Vec& values);

// Random smoothed nodal field: white noise convolved with a 3-point kernel
// along each axis, boundary zeroed. Used by the property suites so that the
// inequality checks probe smooth data rather than grid-scale oscillation.
Vec smooth_random_field(const DomainMesh& mesh, Rng& rng, double amplitude);

// Nodes within Euclidean distance radius of center (center has dim entries).
std::vector<Index> nodes_in_ball(const DomainMesh& mesh,
                                 const Eigen::Vector2d& center, double radius);

// Factorization of the weighted discrete stiffness K = sum_k D_k^T W D_k
// restricted to interior nodes. solve_pairing maps a weak-form pairing
// vector to the corresponding Riesz-representative direction (boundary 0).
class StiffnessSolver {
 public:
  explicit StiffnessSolver(const DomainMesh& mesh);
  Vec solve_pairing(const Vec& pairing) const;

 private:
  const DomainMesh* mesh_;
  std::vector<Index> interior_;             // compact -> full
  std::vector<Index> compact_;              // full -> compact, -1 on boundary
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

}  // namespace dplab
