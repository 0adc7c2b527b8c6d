#include "dgoc/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include "dgoc/quadrature.hpp"

namespace dgoc {

namespace {

std::vector<ElementGeometry> geometries(const Mesh& mesh) {
  std::vector<ElementGeometry> g;
  g.reserve(mesh.num_elements());
  for (int t = 0; t < mesh.num_elements(); ++t) g.emplace_back(mesh, t);
  return g;
}

// One side of an edge as seen from an element: its sign in the jump and its
// weight in the average.
struct Side {
  int element;
  double sign;
  double weight;
};

int side_count(const Edge& e) { return e.is_boundary() ? 1 : 2; }

Side side(const Edge& e, int s) {
  if (e.is_boundary()) return {e.plus, 1.0, 1.0};
  return s == 0 ? Side{e.plus, 1.0, 0.5} : Side{e.minus, -1.0, 0.5};
}

Point edge_point(const Mesh& mesh, const Edge& e, double t) {
  const Point& a = mesh.vertices[e.vertices[0]];
  const Point& b = mesh.vertices[e.vertices[1]];
  return a + t * (b - a);
}

}  // namespace

BlockDiagMatrix assemble_mass(const Mesh& mesh) {
  BlockList blocks(mesh.num_elements());
  Block ref;
  ref << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  for (int t = 0; t < mesh.num_elements(); ++t) blocks[t] = mesh.elements[t].area / 12.0 * ref;
  return BlockDiagMatrix(std::move(blocks));
}

BlockSparseMatrix assemble_sip(const Mesh& mesh, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("assemble_sip: sigma must be > 0");
  const auto geo = geometries(mesh);
  BlockSparseMatrix A = BlockSparseMatrix::dg_pattern(mesh);

  for (int t = 0; t < mesh.num_elements(); ++t) {
    Block& b = A.block(t, t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) b(i, j) += geo[t].area * geo[t].grads[i].dot(geo[t].grads[j]);
  }

  const LineRule& rule = gauss_line_2();
  for (const Edge& e : mesh.edges) {
    const double pen = sigma / e.length;
    for (int q = 0; q < static_cast<int>(rule.points.size()); ++q) {
      const Point x = edge_point(mesh, e, rule.points[q]);
      const double w = rule.weights[q] * e.length;
      for (int sa = 0; sa < side_count(e); ++sa) {
        const Side a = side(e, sa);
        const auto phi_a = geo[a.element].basis(x);
        for (int sb = 0; sb < side_count(e); ++sb) {
          const Side b = side(e, sb);
          const auto phi_b = geo[b.element].basis(x);
          Block& blk = A.block(a.element, b.element);
          for (int i = 0; i < 3; ++i) {
            const double dn_i = e.normal.dot(geo[a.element].grads[i]);
            for (int j = 0; j < 3; ++j) {
              const double dn_j = e.normal.dot(geo[b.element].grads[j]);
              blk(i, j) += w * (-b.weight * dn_j * a.sign * phi_a[i] -
                                a.weight * dn_i * b.sign * phi_b[j] +
                                pen * a.sign * b.sign * phi_a[i] * phi_b[j]);
            }
          }
        }
      }
    }
  }
  return A;
}

BlockSparseMatrix assemble_upwind_ar(const Mesh& mesh, const VectorField& zeta,
                                     const ScalarField& gamma, UpwindForm form) {
  if (!mesh.edges_classified)
    throw std::invalid_argument("assemble_upwind_ar: edges not classified");
  const auto geo = geometries(mesh);
  BlockSparseMatrix A = BlockSparseMatrix::dg_pattern(mesh);

  const TriangleRule& tri = triangle_rule_degree2();
  for (int t = 0; t < mesh.num_elements(); ++t) {
    Block& b = A.block(t, t);
    for (std::size_t q = 0; q < tri.points.size(); ++q) {
      const auto& lam = tri.points[q];
      const Point x = geo[t].map(lam);
      const double w = tri.weights[q] * geo[t].area;
      const Point z = zeta(x);
      const double g = gamma(x);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b(i, j) += w * (z.dot(geo[t].grads[j]) + g * lam[j]) * lam[i];
    }
  }

  const LineRule& rule = gauss_line_2();
  for (const Edge& e : mesh.edges) {
    if (e.is_boundary() && !e.is_inflow()) continue;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = edge_point(mesh, e, rule.points[q]);
      const double w = rule.weights[q] * e.length;
      const double zn = zeta(x).dot(e.normal);
      if (e.is_boundary()) {
        const auto phi = geo[e.plus].basis(x);
        Block& blk = A.block(e.plus, e.plus);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) blk(i, j) -= w * zn * phi[j] * phi[i];
        continue;
      }
      for (int sa = 0; sa < 2; ++sa) {
        const Side a = side(e, sa);
        const auto phi_a = geo[a.element].basis(x);
        // coefficient multiplying φ_i^a in the test slot
        double test = 0.0;
        if (form == UpwindForm::downwind_value) {
          const bool downwind = (zn >= 0.0) ? (sa == 1) : (sa == 0);
          test = downwind ? 1.0 : 0.0;
        }
        for (int sb = 0; sb < 2; ++sb) {
          const Side b = side(e, sb);
          const auto phi_b = geo[b.element].basis(x);
          Block& blk = A.block(a.element, b.element);
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
              const double wj = b.sign * phi_b[j];
              double val;
              if (form == UpwindForm::downwind_value)
                val = -zn * wj * test * phi_a[i];
              else
                val = -zn * wj * a.weight * phi_a[i] + 0.5 * std::abs(zn) * wj * a.sign * phi_a[i];
              blk(i, j) += w * val;
            }
        }
      }
    }
  }
  return A;
}

BlockSparseMatrix assemble_operator(const Mesh& mesh, const ProblemData& pd) {
  BlockSparseMatrix A = assemble_upwind_ar(mesh, pd.zeta, pd.gamma);
  if (pd.epsilon != 0.0) A.add_scaled(pd.epsilon, assemble_sip(mesh, pd.sigma));
  return A;
}

Vector assemble_source(const Mesh& mesh, const ScalarField& source) {
  Vector b = Vector::Zero(mesh.num_dofs());
  const TriangleRule& tri = triangle_rule_degree5();
  for (int t = 0; t < mesh.num_elements(); ++t) {
    const ElementGeometry g(mesh, t);
    for (std::size_t q = 0; q < tri.points.size(); ++q) {
      const auto& lam = tri.points[q];
      const double v = tri.weights[q] * g.area * source(g.map(lam));
      for (int i = 0; i < 3; ++i) b[3 * t + i] += v * lam[i];
    }
  }
  return b;
}

namespace {

Point direction_zeta(const ProblemData& pd, const Point& x, Direction d) {
  return d == Direction::forward ? pd.zeta(x) : Point(-pd.zeta(x));
}

bool inflow_for(const Edge& e, Direction d) {
  return d == Direction::forward ? e.kind == EdgeKind::boundary_inflow
                                 : e.kind == EdgeKind::boundary_outflow;
}

}  // namespace

Vector assemble_lifting(const Mesh& mesh, const ProblemData& pd, const ScalarField& dirichlet,
                        Direction direction) {
  if (!mesh.edges_classified) throw std::invalid_argument("assemble_lifting: edges not classified");
  Vector b = Vector::Zero(mesh.num_dofs());
  const LineRule& rule = gauss_line_4();
  for (const Edge& e : mesh.edges) {
    if (!e.is_boundary()) continue;
    const ElementGeometry g(mesh, e.plus);
    const bool inflow = inflow_for(e, direction);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = edge_point(mesh, e, rule.points[q]);
      const double w = rule.weights[q] * e.length;
      const double gd = dirichlet(x);
      if (gd == 0.0) continue;
      const auto phi = g.basis(x);
      const double zn = inflow ? direction_zeta(pd, x, direction).dot(e.normal) : 0.0;
      for (int i = 0; i < 3; ++i) {
        const double dn = e.normal.dot(g.grads[i]);
        b[3 * e.plus + i] +=
            w * (pd.epsilon * gd * (pd.sigma / e.length * phi[i] - dn) - zn * gd * phi[i]);
      }
    }
  }
  return b;
}

Vector assemble_load(const Mesh& mesh, const ProblemData& pd, const ScalarField& source,
                     const ScalarField& dirichlet, Direction direction) {
  return assemble_source(mesh, source) + assemble_lifting(mesh, pd, dirichlet, direction);
}

namespace {

// ∫ (L u) φ_i for the forward operator L u = -eps Δu + zeta·∇u + gamma u or
// the adjoint L* u = -eps Δu - ∇·(zeta u) + gamma u, integrated by parts on
// each element so only u and ∇u are sampled.
Vector weak_operator_load(const Mesh& mesh, const ProblemData& pd, const ExactSolution& u,
                          Direction d) {
  Vector b = Vector::Zero(mesh.num_dofs());
  const double sgn = d == Direction::forward ? 1.0 : -1.0;
  const TriangleRule& tri = triangle_rule_degree5();
  const LineRule& line = gauss_line_4();
  for (int t = 0; t < mesh.num_elements(); ++t) {
    const ElementGeometry g(mesh, t);
    for (std::size_t q = 0; q < tri.points.size(); ++q) {
      const auto& lam = tri.points[q];
      const Point x = g.map(lam);
      const double w = tri.weights[q] * g.area;
      const double uv = u.value(x);
      const Point du = u.gradient(x);
      const Point z = pd.zeta(x);
      const double gam = pd.gamma(x);
      const double div = pd.zeta_divergence(x);
      for (int i = 0; i < 3; ++i) {
        double v = pd.epsilon * du.dot(g.grads[i]) + gam * uv * lam[i];
        if (d == Direction::forward)
          v -= uv * (z.dot(g.grads[i]) + div * lam[i]);
        else
          v += uv * z.dot(g.grads[i]);
        b[3 * t + i] += w * v;
      }
    }
    // element boundary: -eps ∮ (n_T·∇u) φ ± ∮ (zeta·n_T) u φ
    for (int k = 0; k < 3; ++k) {
      const Edge& e = mesh.edges[mesh.element_edges[t][k]];
      const Point nt = (e.plus == t) ? e.normal : Point(-e.normal);
      for (std::size_t q = 0; q < line.points.size(); ++q) {
        const Point x = edge_point(mesh, e, line.points[q]);
        const double w = line.weights[q] * e.length;
        const auto phi = g.basis(x);
        const double flux =
            -pd.epsilon * nt.dot(u.gradient(x)) + sgn * pd.zeta(x).dot(nt) * u.value(x);
        for (int i = 0; i < 3; ++i) b[3 * t + i] += w * flux * phi[i];
      }
    }
  }
  return b;
}

}  // namespace

Vector assemble_saddle_rhs(const Mesh& mesh, const ProblemData& pd,
                           const ManufacturedProblem& problem, LoadRule rule) {
  const int n = mesh.num_dofs();
  const double bh = pd.beta_half();
  Vector top, bottom;
  if (rule == LoadRule::strong) {
    top = assemble_source(mesh, problem.g);
    bottom = assemble_source(mesh, problem.f);
  } else {
    top = assemble_source(mesh, problem.p.value) +
          bh * weak_operator_load(mesh, pd, problem.y, Direction::forward);
    bottom = -assemble_source(mesh, problem.y.value) +
             bh * weak_operator_load(mesh, pd, problem.p, Direction::adjoint);
  }
  top += bh * assemble_lifting(mesh, pd, problem.dirichlet_y, Direction::forward);
  bottom += bh * assemble_lifting(mesh, pd, problem.dirichlet_p, Direction::adjoint);
  Vector rhs(2 * n);
  rhs << top, bottom;
  return rhs;
}

Vector l2_projection(const Mesh& mesh, const BlockDiagMatrix& mass, const ScalarField& u) {
  return mass.solve(assemble_source(mesh, u));
}

Vector interpolate(const Mesh& mesh, const ScalarField& u) {
  Vector v(mesh.num_dofs());
  for (int t = 0; t < mesh.num_elements(); ++t)
    for (int j = 0; j < 3; ++j) v[3 * t + j] = u(mesh.vertex(t, j));
  return v;
}

SaddleOperator::SaddleOperator(BlockDiagMatrix mass, BlockSparseMatrix op, double beta)
    : mass_(std::move(mass)), op_(std::move(op)), beta_(beta), n_(mass_.rows()) {
  if (op_.rows() != n_ || op_.cols() != n_)
    throw std::invalid_argument("SaddleOperator: dimension mismatch between M and A");
  if (!(beta_ >= 0.0)) throw std::invalid_argument("SaddleOperator: beta must be >= 0");
}

void SaddleOperator::apply(const Vector& x, Vector& out) const {
  if (x.size() != size()) throw std::invalid_argument("SaddleOperator: dimension mismatch");
  const double bh = std::sqrt(beta_);
  const Vector p = x.head(n_);
  const Vector y = x.tail(n_);
  Vector mp, my, ay, atp;
  mass_.multiply(p, mp);
  mass_.multiply(y, my);
  op_.multiply(y, ay);
  op_.multiply_transpose(p, atp);
  out.resize(2 * n_);
  out.head(n_) = mp + bh * ay;
  out.tail(n_) = bh * atp - my;
}

Vector SaddleOperator::operator*(const Vector& x) const {
  Vector out;
  apply(x, out);
  return out;
}

Eigen::MatrixXd SaddleOperator::to_dense() const {
  const double bh = std::sqrt(beta_);
  const Eigen::MatrixXd M = mass_.to_dense();
  const Eigen::MatrixXd A = op_.to_dense();
  Eigen::MatrixXd B(2 * n_, 2 * n_);
  B << M, bh * A, bh * A.transpose(), -M;
  return B;
}

SaddleOperator build_saddle(const BlockDiagMatrix& mass, const BlockSparseMatrix& op, double beta) {
  return SaddleOperator(mass, op, beta);
}

}  // namespace dgoc
