#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/StdVector>

#include "dgoc/mesh.hpp"

namespace dgoc {

using Vector = Eigen::VectorXd;
using Block = Eigen::Matrix3d;
using BlockList = std::vector<Block, Eigen::aligned_allocator<Block>>;

/// Compressed sparse row storage with dense 3x3 blocks, one block row per
/// element. This is the storage behind every assembled DG operator.
class BlockSparseMatrix {
 public:
  BlockSparseMatrix() = default;
  /// Empty (all-zero) matrix on the given block pattern. Columns of each row
  /// must be sorted.
  BlockSparseMatrix(int block_rows, int block_cols, std::vector<int> row_offsets,
                    std::vector<int> col_index);

  /// Pattern of a DG operator: each element couples to itself and its edge
  /// neighbours.
  static BlockSparseMatrix dg_pattern(const Mesh& mesh);

  int block_rows() const { return block_rows_; }
  int block_cols() const { return block_cols_; }
  int rows() const { return 3 * block_rows_; }
  int cols() const { return 3 * block_cols_; }
  int num_blocks() const { return static_cast<int>(col_index_.size()); }

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& col_index() const { return col_index_; }
  const Block& block_at(int slot) const { return blocks_[slot]; }
  Block& block_at(int slot) { return blocks_[slot]; }

  /// Slot of block (row, col), or -1 if structurally absent.
  int find(int row, int col) const;
  Block& block(int row, int col);
  const Block& block(int row, int col) const;

  void multiply(const Vector& x, Vector& y) const;
  void multiply_transpose(const Vector& x, Vector& y) const;
  Vector operator*(const Vector& x) const;

  BlockSparseMatrix transpose() const;
  /// this += alpha * other; patterns must match.
  void add_scaled(double alpha, const BlockSparseMatrix& other);
  void scale(double alpha);

  Eigen::MatrixXd to_dense() const;
  double max_abs() const;

  void write_matrix_market(std::ostream& out) const;

 private:
  int block_rows_ = 0;
  int block_cols_ = 0;
  std::vector<int> row_offsets_;
  std::vector<int> col_index_;
  BlockList blocks_;
};

/// Block-diagonal matrix with one SPD 3x3 block per element; keeps the block
/// inverses for exact solves.
class BlockDiagMatrix {
 public:
  BlockDiagMatrix() = default;
  explicit BlockDiagMatrix(BlockList blocks);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int rows() const { return 3 * num_blocks(); }
  const Block& block(int i) const { return blocks_[i]; }

  void multiply(const Vector& x, Vector& y) const;
  Vector operator*(const Vector& x) const;
  void solve(const Vector& b, Vector& x) const;
  Vector solve(const Vector& b) const;

  Eigen::MatrixXd to_dense() const;

 private:
  BlockList blocks_;
  BlockList inverses_;
};

/// Returns scale * A + M on the pattern of A.
BlockSparseMatrix add_block_diagonal(const BlockSparseMatrix& A, double scale,
                                     const BlockDiagMatrix& M);

}  // namespace dgoc
