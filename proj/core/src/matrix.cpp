#include "conley/matrix.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace conley {

SparseIntMatrix SparseIntMatrix::from_dense(const std::vector<std::vector<std::int64_t>>& dense) {
  const int rows = static_cast<int>(dense.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(dense.front().size());
  SparseIntMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(dense[r].size()) != cols) throw std::invalid_argument("ragged matrix");
    for (int c = 0; c < cols; ++c) {
      if (dense[r][c] != 0) m.columns_[c].emplace_back(r, dense[r][c]);
    }
  }
  return m;
}

void SparseIntMatrix::add(int r, int c, std::int64_t value) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("matrix index");
  if (value == 0) return;
  auto& col = columns_[c];
  auto it = std::lower_bound(col.begin(), col.end(), r,
                             [](const Entry& e, int row) { return e.first < row; });
  if (it != col.end() && it->first == r) {
    it->second += value;
    if (it->second == 0) col.erase(it);
  } else {
    col.insert(it, {r, value});
  }
}

std::int64_t SparseIntMatrix::at(int r, int c) const {
  const auto& col = columns_.at(c);
  auto it = std::lower_bound(col.begin(), col.end(), r,
                             [](const Entry& e, int row) { return e.first < row; });
  return it != col.end() && it->first == r ? it->second : 0;
}

std::size_t SparseIntMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& col : columns_) n += col.size();
  return n;
}

std::vector<std::vector<std::int64_t>> SparseIntMatrix::to_dense() const {
  std::vector<std::vector<std::int64_t>> d(rows_, std::vector<std::int64_t>(cols_, 0));
  for (int c = 0; c < cols_; ++c) {
    for (const auto& [r, v] : columns_[c]) d[r][c] = v;
  }
  return d;
}

SparseIntMatrix SparseIntMatrix::multiply(const SparseIntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix dimension mismatch");
  SparseIntMatrix out(rows_, rhs.cols_);
  for (int c = 0; c < rhs.cols_; ++c) {
    std::map<int, std::int64_t> acc;
    for (const auto& [k, b] : rhs.columns_[c]) {
      for (const auto& [r, a] : columns_[k]) acc[r] += a * b;
    }
    for (const auto& [r, v] : acc) {
      if (v != 0) out.columns_[c].emplace_back(r, v);
    }
  }
  return out;
}

}  // namespace conley
