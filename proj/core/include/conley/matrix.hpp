#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace conley {

/// Column-major sparse integer matrix. Each column holds (row, value) pairs
/// sorted by row with no explicit zeros.
class SparseIntMatrix {
 public:
  using Entry = std::pair<int, std::int64_t>;

  SparseIntMatrix() = default;
  SparseIntMatrix(int rows, int cols) : rows_(rows), cols_(cols), columns_(cols) {}

  static SparseIntMatrix from_dense(const std::vector<std::vector<std::int64_t>>& dense);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  /// Adds `value` to entry (r, c).
  void add(int r, int c, std::int64_t value);
  std::int64_t at(int r, int c) const;

  const std::vector<Entry>& column(int c) const { return columns_[c]; }
  std::size_t nonzeros() const;

  std::vector<std::vector<std::int64_t>> to_dense() const;

  /// Product this * rhs; dimensions must agree.
  SparseIntMatrix multiply(const SparseIntMatrix& rhs) const;
  bool is_zero() const { return nonzeros() == 0; }

  friend bool operator==(const SparseIntMatrix&, const SparseIntMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::vector<Entry>> columns_;
};

}  // namespace conley
