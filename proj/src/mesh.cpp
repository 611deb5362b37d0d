#include "dplab/mesh.hpp"

#include <cmath>
#include <string>

#include "dplab/errors.hpp"

namespace dplab {

double DomainMesh::volume() const {
  double v = hi[0] - lo[0];
  if (dim == 2) v *= hi[1] - lo[1];
  return v;
}

namespace {

// Appends the 1D first-derivative stencil along one axis of the flattened
// grid: central at interior nodes, one-sided (first order) at the two ends.
void axis_stencil_rows(int along, int nx, int ny, double h,
                       std::vector<Eigen::Triplet<double>>& trips) {
  auto id = [nx](int i, int j) { return i + nx * j; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int row = id(i, j);
      const int pos = (along == 0) ? i : j;
      const int n = (along == 0) ? nx : ny;
      auto neighbor = [&](int off) {
        return (along == 0) ? id(i + off, j) : id(i, j + off);
      };
      if (pos == 0) {
        trips.emplace_back(row, neighbor(0), -1.0 / h);
        trips.emplace_back(row, neighbor(1), 1.0 / h);
      } else if (pos == n - 1) {
        trips.emplace_back(row, neighbor(-1), -1.0 / h);
        trips.emplace_back(row, neighbor(0), 1.0 / h);
      } else {
        trips.emplace_back(row, neighbor(-1), -0.5 / h);
        trips.emplace_back(row, neighbor(1), 0.5 / h);
      }
    }
  }
}

}  // namespace

DomainMesh build_mesh(const std::array<double, 2>& lo,
                      const std::array<double, 2>& hi,
                      const std::array<int, 2>& nodes_per_axis, int dim,
                      Index node_cap) {
  if (dim != 1 && dim != 2)
    throw config_error("mesh dimension must be 1 or 2, got " + std::to_string(dim));
  Index total = 1;
  for (int k = 0; k < dim; ++k) {
    if (nodes_per_axis[k] < 3)
      throw config_error("nodes_per_axis must be >= 3 on axis " + std::to_string(k));
    if (!(hi[k] > lo[k]))
      throw config_error("degenerate interval on axis " + std::to_string(k));
    total *= nodes_per_axis[k];
  }
  if (total > node_cap)
    throw resource_error("mesh would have " + std::to_string(total) +
                         " nodes, cap is " + std::to_string(node_cap));

  DomainMesh m;
  m.dim = dim;
  m.lo = lo;
  m.hi = hi;
  m.nodes_per_axis = nodes_per_axis;
  if (dim == 1) m.nodes_per_axis[1] = 1;
  for (int k = 0; k < dim; ++k)
    m.spacing[k] = (hi[k] - lo[k]) / (nodes_per_axis[k] - 1);

  m.weights.resize(total);
  m.boundary.assign(static_cast<std::size_t>(total), 0);
  m.coords.resize(total, dim);

  const int nx = m.nodes_per_axis[0];
  const int ny = m.nodes_per_axis[1];
  auto axis_weight = [](int i, int n, double h) {
    return (i == 0 || i == n - 1) ? 0.5 * h : h;
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Index id = m.node_index(i, j);
      double w = axis_weight(i, nx, m.spacing[0]);
      bool bnd = (i == 0 || i == nx - 1);
      m.coords(id, 0) = lo[0] + i * m.spacing[0];
      if (dim == 2) {
        w *= axis_weight(j, ny, m.spacing[1]);
        bnd = bnd || (j == 0 || j == ny - 1);
        m.coords(id, 1) = lo[1] + j * m.spacing[1];
      }
      m.weights[id] = w;
      m.boundary[static_cast<std::size_t>(id)] = bnd ? 1 : 0;
    }
  }

  // Derivative operators on the flattened index.
  for (int k = 0; k < dim; ++k) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(2 * total));
    axis_stencil_rows(k, nx, ny, m.spacing[static_cast<std::size_t>(k)], trips);
    Eigen::SparseMatrix<double> d(total, total);
    d.setFromTriplets(trips.begin(), trips.end());
    m.diff[static_cast<std::size_t>(k)] = std::move(d);
  }
  return m;
}

DomainMesh build_mesh_1d(double a, double b, int nodes, Index node_cap) {
  return build_mesh({a, 0.0}, {b, 0.0}, {nodes, 1}, 1, node_cap);
}

Mat gradient(const DomainMesh& mesh, const Vec& u) {
  if (u.size() != mesh.count()) throw data_error("nodal field does not conform to mesh");
  Mat g(mesh.count(), mesh.dim);
  for (int k = 0; k < mesh.dim; ++k) g.col(k) = mesh.diff[static_cast<std::size_t>(k)] * u;
  return g;
}

Vec gradient_magnitude(const DomainMesh& mesh, const Vec& u) {
  return gradient(mesh, u).rowwise().norm();
}

double integrate(const DomainMesh& mesh, const Vec& f) {
  if (f.size() != mesh.count()) throw data_error("nodal field does not conform to mesh");
  double s = 0.0;
  for (Index i = 0; i < f.size(); ++i) s += mesh.weights[i] * f[i];
  if (!std::isfinite(s)) {
    for (Index i = 0; i < f.size(); ++i)
      if (!std::isfinite(f[i]))
        throw data_error("non-finite value at node " + std::to_string(i));
    throw range_error("integral overflow");
  }
  return s;
}

Vec divergence_adjoint(const DomainMesh& mesh, const Mat& flux) {
  Vec r = Vec::Zero(mesh.count());
  for (int k = 0; k < mesh.dim; ++k) {
    const Vec wf = mesh.weights.cwiseProduct(flux.col(k));
    r += mesh.diff[static_cast<std::size_t>(k)].transpose() * wf;
  }
  return r;
}

GridFunction zero_trace(const DomainMesh& mesh, const Vec& values) {
  if (values.size() != mesh.count())
    throw data_error("nodal field does not conform to mesh");
  GridFunction gf{&mesh, values};
  for (Index i = 0; i < mesh.count(); ++i)
    if (mesh.boundary[static_cast<std::size_t>(i)]) gf.values[i] = 0.0;
  return gf;
}

Vec smooth_random_field(const DomainMesh& mesh, Rng& rng, double amplitude) {
  Vec u(mesh.count());
  for (Index i = 0; i < u.size(); ++i) u[i] = amplitude * (2.0 * rng.uniform() - 1.0);

  const int nx = mesh.nodes_per_axis[0];
  const int ny = mesh.nodes_per_axis[1];
  auto smooth_axis0 = [&](Vec& v) {
    Vec out = v;
    for (int j = 0; j < ny; ++j)
      for (int i = 1; i + 1 < nx; ++i) {
        const Index id = mesh.node_index(i, j);
        out[id] = 0.25 * v[mesh.node_index(i - 1, j)] + 0.5 * v[id] +
                  0.25 * v[mesh.node_index(i + 1, j)];
      }
    v = out;
  };
  smooth_axis0(u);
  if (mesh.dim == 2) {
    Vec out = u;
    for (int j = 1; j + 1 < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const Index id = mesh.node_index(i, j);
        out[id] = 0.25 * u[mesh.node_index(i, j - 1)] + 0.5 * u[id] +
                  0.25 * u[mesh.node_index(i, j + 1)];
      }
    u = out;
  }
  for (Index i = 0; i < mesh.count(); ++i)
    if (mesh.boundary[static_cast<std::size_t>(i)]) u[i] = 0.0;
  return u;
}

StiffnessSolver::StiffnessSolver(const DomainMesh& mesh) : mesh_(&mesh) {
  compact_.assign(static_cast<std::size_t>(mesh.count()), -1);
  for (Index i = 0; i < mesh.count(); ++i) {
    if (!mesh.boundary[static_cast<std::size_t>(i)]) {
      compact_[static_cast<std::size_t>(i)] = static_cast<Index>(interior_.size());
      interior_.push_back(i);
    }
  }
  const Index n = static_cast<Index>(interior_.size());
  Eigen::SparseMatrix<double> sel(mesh.count(), n);
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) trips.emplace_back(interior_[static_cast<std::size_t>(j)], j, 1.0);
    sel.setFromTriplets(trips.begin(), trips.end());
  }
  Eigen::SparseMatrix<double> k(n, n);
  for (int ax = 0; ax < mesh.dim; ++ax) {
    const Eigen::SparseMatrix<double> dk = mesh.diff[static_cast<std::size_t>(ax)] * sel;
    k += Eigen::SparseMatrix<double>(dk.transpose() * mesh.weights.asDiagonal() * dk);
  }
  llt_.compute(k);
  if (llt_.info() != Eigen::Success)
    throw numeric_error("stiffness factorization failed");
}

Vec StiffnessSolver::solve_pairing(const Vec& pairing) const {
  const Index n = static_cast<Index>(interior_.size());
  Vec rhs(n);
  for (Index j = 0; j < n; ++j) rhs[j] = pairing[interior_[static_cast<std::size_t>(j)]];
  const Vec sol = llt_.solve(rhs);
  Vec full = Vec::Zero(mesh_->count());
  for (Index j = 0; j < n; ++j) full[interior_[static_cast<std::size_t>(j)]] = sol[j];
  return full;
}

std::vector<Index> nodes_in_ball(const DomainMesh& mesh,
                                 const Eigen::Vector2d& center, double radius) {
  std::vector<Index> out;
  for (Index i = 0; i < mesh.count(); ++i) {
    double d2 = 0.0;
    for (int k = 0; k < mesh.dim; ++k) {
      const double d = mesh.coords(i, k) - center[k];
      d2 += d * d;
    }
    if (d2 <= radius * radius) out.push_back(i);
  }
  return out;
}

}  // namespace dplab
