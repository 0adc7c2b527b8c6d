#include "dgoc/sparse.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/LU>

namespace dgoc {

BlockSparseMatrix::BlockSparseMatrix(int block_rows, int block_cols, std::vector<int> row_offsets,
                                     std::vector<int> col_index)
    : block_rows_(block_rows),
      block_cols_(block_cols),
      row_offsets_(std::move(row_offsets)),
      col_index_(std::move(col_index)),
      blocks_(col_index_.size(), Block::Zero()) {
  if (static_cast<int>(row_offsets_.size()) != block_rows_ + 1 ||
      row_offsets_.back() != static_cast<int>(col_index_.size()))
    throw std::invalid_argument("BlockSparseMatrix: inconsistent row offsets");
}

BlockSparseMatrix BlockSparseMatrix::dg_pattern(const Mesh& mesh) {
  const int n = mesh.num_elements();
  std::vector<int> offsets(n + 1, 0);
  std::vector<int> cols;
  cols.reserve(4 * n);
  for (int t = 0; t < n; ++t) {
    std::array<int, 4> row{t, -1, -1, -1};
    int count = 1;
    for (int e : mesh.element_edges[t]) {
      const int nb = mesh.neighbor(t, e);
      if (nb >= 0) row[count++] = nb;
    }
    std::sort(row.begin(), row.begin() + count);
    cols.insert(cols.end(), row.begin(), row.begin() + count);
    offsets[t + 1] = static_cast<int>(cols.size());
  }
  return BlockSparseMatrix(n, n, std::move(offsets), std::move(cols));
}

int BlockSparseMatrix::find(int row, int col) const {
  for (int s = row_offsets_[row]; s < row_offsets_[row + 1]; ++s)
    if (col_index_[s] == col) return s;
  return -1;
}

Block& BlockSparseMatrix::block(int row, int col) {
  const int s = find(row, col);
  if (s < 0)
    throw std::out_of_range("block (" + std::to_string(row) + "," + std::to_string(col) +
                            ") not in pattern");
  return blocks_[s];
}

const Block& BlockSparseMatrix::block(int row, int col) const {
  return const_cast<BlockSparseMatrix*>(this)->block(row, col);
}

void BlockSparseMatrix::multiply(const Vector& x, Vector& y) const {
  if (x.size() != cols()) throw std::invalid_argument("multiply: dimension mismatch");
  y.resize(rows());
  for (int r = 0; r < block_rows_; ++r) {
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (int s = row_offsets_[r]; s < row_offsets_[r + 1]; ++s)
      acc.noalias() += blocks_[s] * x.segment<3>(3 * col_index_[s]);
    y.segment<3>(3 * r) = acc;
  }
}

void BlockSparseMatrix::multiply_transpose(const Vector& x, Vector& y) const {
  if (x.size() != rows()) throw std::invalid_argument("multiply_transpose: dimension mismatch");
  y.setZero(cols());
  for (int r = 0; r < block_rows_; ++r) {
    const Eigen::Vector3d xr = x.segment<3>(3 * r);
    for (int s = row_offsets_[r]; s < row_offsets_[r + 1]; ++s)
      y.segment<3>(3 * col_index_[s]).noalias() += blocks_[s].transpose() * xr;
  }
}

Vector BlockSparseMatrix::operator*(const Vector& x) const {
  Vector y;
  multiply(x, y);
  return y;
}

BlockSparseMatrix BlockSparseMatrix::transpose() const {
  std::vector<int> counts(block_cols_ + 1, 0);
  for (int c : col_index_) ++counts[c + 1];
  for (int c = 0; c < block_cols_; ++c) counts[c + 1] += counts[c];
  std::vector<int> cols(col_index_.size());
  std::vector<int> source(col_index_.size());
  std::vector<int> cursor(counts.begin(), counts.end() - 1);
  // Rows visited in increasing order keep the transposed columns sorted.
  for (int r = 0; r < block_rows_; ++r)
    for (int s = row_offsets_[r]; s < row_offsets_[r + 1]; ++s) {
      const int slot = cursor[col_index_[s]]++;
      cols[slot] = r;
      source[slot] = s;
    }
  BlockSparseMatrix t(block_cols_, block_rows_, counts, std::move(cols));
  for (std::size_t slot = 0; slot < source.size(); ++slot)
    t.blocks_[slot] = blocks_[source[slot]].transpose();
  return t;
}

void BlockSparseMatrix::add_scaled(double alpha, const BlockSparseMatrix& other) {
  if (other.row_offsets_ != row_offsets_ || other.col_index_ != col_index_)
    throw std::invalid_argument("add_scaled: sparsity patterns differ");
  for (std::size_t s = 0; s < blocks_.size(); ++s) blocks_[s] += alpha * other.blocks_[s];
}

void BlockSparseMatrix::scale(double alpha) {
  for (Block& b : blocks_) b *= alpha;
}

Eigen::MatrixXd BlockSparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows(), cols());
  for (int r = 0; r < block_rows_; ++r)
    for (int s = row_offsets_[r]; s < row_offsets_[r + 1]; ++s)
      d.block<3, 3>(3 * r, 3 * col_index_[s]) = blocks_[s];
  return d;
}

double BlockSparseMatrix::max_abs() const {
  double m = 0.0;
  for (const Block& b : blocks_) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

void BlockSparseMatrix::write_matrix_market(std::ostream& out) const {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << rows() << ' ' << cols() << ' ' << 9 * num_blocks() << '\n';
  out.precision(17);
  for (int r = 0; r < block_rows_; ++r)
    for (int s = row_offsets_[r]; s < row_offsets_[r + 1]; ++s)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          out << 3 * r + i + 1 << ' ' << 3 * col_index_[s] + j + 1 << ' ' << blocks_[s](i, j)
              << '\n';
}

BlockDiagMatrix::BlockDiagMatrix(BlockList blocks) : blocks_(std::move(blocks)) {
  inverses_.reserve(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    Eigen::FullPivLU<Block> lu(blocks_[i]);
    if (!lu.isInvertible())
      throw std::runtime_error("singular mass block on element " + std::to_string(i));
    inverses_.push_back(lu.inverse());
  }
}

void BlockDiagMatrix::multiply(const Vector& x, Vector& y) const {
  if (x.size() != rows()) throw std::invalid_argument("BlockDiagMatrix: dimension mismatch");
  y.resize(rows());
  for (int i = 0; i < num_blocks(); ++i) y.segment<3>(3 * i) = blocks_[i] * x.segment<3>(3 * i);
}

Vector BlockDiagMatrix::operator*(const Vector& x) const {
  Vector y;
  multiply(x, y);
  return y;
}

void BlockDiagMatrix::solve(const Vector& b, Vector& x) const {
  if (b.size() != rows()) throw std::invalid_argument("BlockDiagMatrix: dimension mismatch");
  x.resize(rows());
  for (int i = 0; i < num_blocks(); ++i) x.segment<3>(3 * i) = inverses_[i] * b.segment<3>(3 * i);
}

Vector BlockDiagMatrix::solve(const Vector& b) const {
  Vector x;
  solve(b, x);
  return x;
}

Eigen::MatrixXd BlockDiagMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows(), rows());
  for (int i = 0; i < num_blocks(); ++i) d.block<3, 3>(3 * i, 3 * i) = blocks_[i];
  return d;
}

BlockSparseMatrix add_block_diagonal(const BlockSparseMatrix& A, double scale,
                                     const BlockDiagMatrix& M) {
  if (A.block_rows() != M.num_blocks() || A.block_cols() != M.num_blocks())
    throw std::invalid_argument("add_block_diagonal: dimension mismatch");
  BlockSparseMatrix P = A;
  P.scale(scale);
  for (int t = 0; t < M.num_blocks(); ++t) P.block(t, t) += M.block(t);
  return P;
}

}  // namespace dgoc
