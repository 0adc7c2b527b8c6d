#include "dgoc/multigrid.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "dgoc/quadrature.hpp"

namespace dgoc {

BlockList diagonal_block_inverses(const BlockSparseMatrix& P) {
  BlockList inv(P.block_rows());
  for (int t = 0; t < P.block_rows(); ++t) {
    Eigen::FullPivLU<Block> lu(P.block(t, t));
    if (!lu.isInvertible())
      throw std::runtime_error("singular diagonal block on element " + std::to_string(t));
    inv[t] = lu.inverse();
  }
  return inv;
}

void block_gauss_seidel(const BlockSparseMatrix& P, const BlockList& diag_inv, const Vector& b,
                        Vector& x, const ElementPermutation& perm, const SmootherSpec& spec) {
  if (spec.sweeps < 0) throw std::invalid_argument("block_gauss_seidel: negative sweep count");
  const int n = P.block_rows();
  if (perm.size() != n || b.size() != P.rows() || x.size() != P.rows())
    throw std::invalid_argument("block_gauss_seidel: dimension mismatch");
  const auto& off = P.row_offsets();
  const auto& col = P.col_index();
  for (int s = 0; s < spec.sweeps; ++s) {
    for (int pos = 0; pos < n; ++pos) {
      const int t = perm.order[spec.direction == SweepDirection::forward ? pos : n - 1 - pos];
      Eigen::Vector3d r = b.segment<3>(3 * t);
      for (int k = off[t]; k < off[t + 1]; ++k)
        if (col[k] != t) r.noalias() -= P.block_at(k) * x.segment<3>(3 * col[k]);
      x.segment<3>(3 * t) = diag_inv[t] * r;
    }
  }
}

Vector block_gauss_seidel(const BlockSparseMatrix& P, const Vector& b, const Vector& x,
                          const ElementPermutation& perm, const SmootherSpec& spec) {
  Vector out = x;
  block_gauss_seidel(P, diagonal_block_inverses(P), b, out, perm, spec);
  return out;
}

BlockSparseMatrix build_prolongation(const Mesh& coarse, const Mesh& fine) {
  const int nf = fine.num_elements();
  if (nf != 4 * coarse.num_elements())
    throw std::invalid_argument("build_prolongation: meshes are not one refinement apart");
  std::vector<int> offsets(nf + 1);
  std::vector<int> cols(nf);
  for (int f = 0; f < nf; ++f) {
    offsets[f + 1] = f + 1;
    cols[f] = f / 4;
  }
  BlockSparseMatrix I(nf, coarse.num_elements(), std::move(offsets), std::move(cols));
  for (int f = 0; f < nf; ++f) {
    const ElementGeometry parent(coarse, f / 4);
    Block& b = I.block_at(f);
    for (int i = 0; i < 3; ++i) {
      const auto lam = parent.basis(fine.vertex(f, i));
      for (int j = 0; j < 3; ++j) b(i, j) = lam[j];
    }
  }
  return I;
}

MGHierarchy build_hierarchy(int finest_level, const ProblemData& pd, int m1, int m2) {
  if (finest_level < 0) throw std::invalid_argument("build_hierarchy: negative level");
  if (m1 < 0 || m2 < 0) throw std::invalid_argument("build_hierarchy: negative smoothing count");
  pd.validate();
  MGHierarchy h;
  h.m1 = m1;
  h.m2 = m2;
  h.pd = pd;
  h.levels.reserve(finest_level + 1);
  const double bh = pd.beta_half();
  Mesh mesh = build_unit_square_mesh();
  for (int k = 0; k <= finest_level; ++k) {
    if (k > 0) mesh = refine_uniform(mesh);
    MGLevel lv;
    lv.mesh = classify_edges(mesh, pd.zeta);
    lv.mass = assemble_mass(lv.mesh);
    lv.A = assemble_operator(lv.mesh, pd);
    lv.P = add_block_diagonal(lv.A, bh, lv.mass);
    lv.Pt = lv.P.transpose();
    lv.perm = downwind_order(lv.mesh, pd.zeta);
    lv.diag_inv = diagonal_block_inverses(lv.P);
    lv.diag_inv_t = diagonal_block_inverses(lv.Pt);
    if (k > 0) {
      lv.prolongation = build_prolongation(h.levels.back().mesh, lv.mesh);
      lv.restriction = lv.prolongation.transpose();
    }
    h.levels.push_back(std::move(lv));
  }
  h.coarse_lu.compute(h.levels[0].P.to_dense());
  h.coarse_lu_t.compute(h.levels[0].Pt.to_dense());
  return h;
}

namespace {

void cycle(const MGHierarchy& h, int k, const Vector& f, Vector& u, bool transpose, int m1,
           int m2) {
  const MGLevel& lv = h.levels[k];
  if (k == 0) {
    u = transpose ? h.coarse_lu_t.solve(f) : h.coarse_lu.solve(f);
    return;
  }
  const BlockSparseMatrix& P = transpose ? lv.Pt : lv.P;
  const BlockList& dinv = transpose ? lv.diag_inv_t : lv.diag_inv;
  const SweepDirection dir = transpose ? SweepDirection::backward : SweepDirection::forward;
  const int pre = transpose ? m2 : m1;
  const int post = transpose ? m1 : m2;

  block_gauss_seidel(P, dinv, f, u, lv.perm, {dir, pre});
  Vector r;
  P.multiply(u, r);
  r = f - r;
  Vector rc;
  lv.restriction.multiply(r, rc);
  Vector ec = Vector::Zero(rc.size());
  cycle(h, k - 1, rc, ec, transpose, m1, m2);
  Vector corr;
  lv.prolongation.multiply(ec, corr);
  u += corr;
  block_gauss_seidel(P, dinv, f, u, lv.perm, {dir, post});
}

}  // namespace

Vector v_cycle(const MGHierarchy& h, int k, const Vector& f, const Vector& u0, bool transpose,
               int m1, int m2) {
  if (k < 0 || k > h.finest()) throw std::out_of_range("v_cycle: level out of range");
  const int n = h.levels[k].mesh.num_dofs();
  if (f.size() != n || u0.size() != n) throw std::invalid_argument("v_cycle: dimension mismatch");
  Vector u = u0;
  cycle(h, k, f, u, transpose, m1, m2);
  return u;
}

Vector v_cycle(const MGHierarchy& h, int k, const Vector& f, const Vector& u0, bool transpose) {
  return v_cycle(h, k, f, u0, transpose, h.m1, h.m2);
}

ContractionEstimate estimate_contraction(const MGHierarchy& h, int k, int m, bool transpose,
                                         int seeds, std::uint64_t seed) {
  constexpr int kMaxIter = 30;
  constexpr double kStable = 0.05;
  constexpr double kFloor = 1e-15;
  if (seeds < 1) throw std::invalid_argument("estimate_contraction: need at least one seed");
  const int n = h.level(k).mesh.num_dofs();
  const Vector zero = Vector::Zero(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ContractionEstimate best;
  for (int s = 0; s < seeds; ++s) {
    Vector e(n);
    for (int i = 0; i < n; ++i) e[i] = normal(rng);
    e.normalize();
    double prev = -1.0, ratio = 0.0;
    int it = 0;
    for (it = 1; it <= kMaxIter; ++it) {
      Vector next = v_cycle(h, k, zero, e, transpose, m, m);
      const double nn = next.norm();
      ratio = nn;  // e has unit norm
      if (ratio < kFloor || nn == 0.0) break;
      if (prev > 0.0 && std::abs(ratio - prev) < kStable * prev) break;
      prev = ratio;
      e = next / nn;
    }
    if (ratio >= best.rate) {
      best.rate = ratio;
      best.iterations = std::min(it, kMaxIter);
    }
  }
  best.diverged = best.rate > 1.0;
  return best;
}

}  // namespace dgoc
