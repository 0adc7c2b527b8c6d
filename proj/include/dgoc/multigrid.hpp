#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/LU>

#include "dgoc/assembly.hpp"
#include "dgoc/mesh.hpp"
#include "dgoc/ordering.hpp"
#include "dgoc/problems.hpp"
#include "dgoc/sparse.hpp"

namespace dgoc {

enum class SweepDirection { forward, backward };

struct SmootherSpec {
  SweepDirection direction = SweepDirection::forward;
  int sweeps = 1;
};

/// Inverses of the 3x3 diagonal blocks; throws naming the element if one is
/// singular.
BlockList diagonal_block_inverses(const BlockSparseMatrix& P);

/// Block Gauss-Seidel: for each element T in `perm` order (reversed for
/// backward), x_T <- D_T^{-1}(b_T - sum_{S != T} P_TS x_S).
void block_gauss_seidel(const BlockSparseMatrix& P, const BlockList& diag_inv, const Vector& b,
                        Vector& x, const ElementPermutation& perm, const SmootherSpec& spec);
Vector block_gauss_seidel(const BlockSparseMatrix& P, const Vector& b, const Vector& x,
                          const ElementPermutation& perm, const SmootherSpec& spec);

/// Exact embedding of the coarse broken P1 space into the fine one under red
/// refinement (fine element f has parent f / 4).
BlockSparseMatrix build_prolongation(const Mesh& coarse, const Mesh& fine);

struct MGLevel {
  Mesh mesh;
  BlockDiagMatrix mass;
  BlockSparseMatrix A;   // eps A_sip + A_ar
  BlockSparseMatrix P;   // beta^½ A + M
  BlockSparseMatrix Pt;  // P^T
  ElementPermutation perm;  // downwind for zeta
  BlockList diag_inv;       // of P
  BlockList diag_inv_t;     // of P^T
  BlockSparseMatrix prolongation;  // level k-1 -> k; empty on level 0
  BlockSparseMatrix restriction;   // prolongation^T
};

/// levels[0] is the two-triangle mesh, levels.back() the finest.
struct MGHierarchy {
  std::vector<MGLevel> levels;
  int m1 = 8;
  int m2 = 8;
  ProblemData pd;
  Eigen::PartialPivLU<Eigen::MatrixXd> coarse_lu;
  Eigen::PartialPivLU<Eigen::MatrixXd> coarse_lu_t;

  int finest() const { return static_cast<int>(levels.size()) - 1; }
  const MGLevel& level(int k) const { return levels.at(k); }
};

MGHierarchy build_hierarchy(int finest_level, const ProblemData& pd, int m1 = 8, int m2 = 8);

/// One V-cycle for P_k u = f from u0. With `transpose` it runs on P_k^T with
/// backward sweeps and m2/m1 swapped, so that its linear part is exactly the
/// transpose of the primal cycle's.
Vector v_cycle(const MGHierarchy& h, int k, const Vector& f, const Vector& u0, bool transpose);
Vector v_cycle(const MGHierarchy& h, int k, const Vector& f, const Vector& u0, bool transpose,
               int m1, int m2);

struct ContractionEstimate {
  double rate = 0.0;
  int iterations = 0;  // of the seed attaining the maximum
  bool diverged = false;
};

/// Homogeneous iteration from `seeds` random unit vectors with m1 = m2 = m;
/// each seed runs until consecutive ratios differ by < 5% or 30 cycles, and
/// the largest final ratio is returned.
ContractionEstimate estimate_contraction(const MGHierarchy& h, int k, int m, bool transpose = false,
                                         int seeds = 5, std::uint64_t seed = 20240101);

}  // namespace dgoc
