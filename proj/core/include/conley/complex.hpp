#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "conley/field.hpp"
#include "conley/matrix.hpp"

namespace conley {

inline constexpr int kMaxDepth = 12;

/// Axis-aligned rectangle carrying the dyadic grid.
struct Rect {
  double x0 = -1.0;
  double x1 = 1.0;
  double y0 = -1.0;
  double y1 = 1.0;

  /// Throws std::invalid_argument unless x0 < x1 and y0 < y1.
  void validate() const;
  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

enum class Axis : std::uint8_t { Horizontal = 0, Vertical = 1 };

/// An elementary cube of the grid at `depth`. Vertices are (i, j) for
/// 0 <= i, j <= 2^depth; a horizontal edge (i, j) joins vertex (i, j) to
/// (i + 1, j), a vertical one joins (i, j) to (i, j + 1); square (i, j) has
/// lower-left vertex (i, j). `axis` is only meaningful for dim 1.
struct Cell {
  int dim = 0;
  int i = 0;
  int j = 0;
  Axis axis = Axis::Horizontal;

  /// Canonical order: (dim, j, i, axis).
  friend auto operator<=>(const Cell& a, const Cell& b) {
    if (auto c = a.dim <=> b.dim; c != 0) return c;
    if (auto c = a.j <=> b.j; c != 0) return c;
    if (auto c = a.i <=> b.i; c != 0) return c;
    return a.axis <=> b.axis;
  }
  friend bool operator==(const Cell&, const Cell&) = default;

  static Cell vertex(int i, int j) { return {0, i, j, Axis::Horizontal}; }
  static Cell hedge(int i, int j) { return {1, i, j, Axis::Horizontal}; }
  static Cell vedge(int i, int j) { return {1, i, j, Axis::Vertical}; }
  static Cell square(int i, int j) { return {2, i, j, Axis::Horizontal}; }
};

struct CellBox {
  double x_min, y_min, x_max, y_max;
  Point center() const { return {(x_min + x_max) / 2, (y_min + y_max) / 2}; }
};

/// Exact realization of `cell` in `rect` at `depth`.
CellBox geometry(const Rect& rect, int depth, const Cell& cell);
Point vertex_point(const Rect& rect, int depth, int i, int j);

/// Faces of a 2- or 1-cell with their boundary coefficients. Squares use the
/// counter-clockwise convention: bottom + right - top - left.
std::vector<std::pair<Cell, int>> boundary(const Cell& cell);

/// A closed finite set of cells on the grid of `rect` at a fixed depth.
/// Every operation keeps the set closed under taking faces.
class CubicalSet {
 public:
  CubicalSet(Rect rect, int depth);

  static CubicalSet from_cells(Rect rect, int depth, const std::vector<Cell>& cells);

  const Rect& rect() const { return rect_; }
  int depth() const { return depth_; }
  int resolution() const { return n_; }

  bool valid(const Cell& c) const;
  bool contains(const Cell& c) const;

  /// Inserts `c` together with all of its faces.
  void insert(const Cell& c);

  /// Cells of dimension `dim` in canonical order.
  std::vector<Cell> cells(int dim) const;
  std::size_t count(int dim) const { return counts_[dim]; }
  bool empty() const { return counts_[0] == 0; }

  bool subset_of(const CubicalSet& other) const;
  bool same_grid(const CubicalSet& other) const {
    return depth_ == other.depth_ && rect_ == other.rect_;
  }

  CubicalSet united(const CubicalSet& other) const;
  /// Intersection of two closed sets (again closed).
  CubicalSet intersected(const CubicalSet& other) const;

  friend bool operator==(const CubicalSet& a, const CubicalSet& b) {
    return a.same_grid(b) && a.bits_ == b.bits_;
  }

 private:
  std::size_t index(const Cell& c) const;
  Cell cell_at(int dim, std::size_t idx) const;

  Rect rect_;
  int depth_;
  int n_;
  std::array<std::vector<std::uint8_t>, 3> bits_;
  std::array<std::size_t, 3> counts_{0, 0, 0};
};

using PointPredicate = std::function<bool(Point)>;

/// Squares whose centers satisfy `predicate`, closed. Throws EmptySet when
/// none qualifies and std::invalid_argument when depth is outside [0, max_depth].
CubicalSet build_set(const Rect& rect, int depth, const PointPredicate& predicate,
                     int max_depth = kMaxDepth);

/// Boundary matrices of a (relative) cubical chain complex. `cells[k]` is the
/// canonical basis of the k-chains; d1 maps 1-chains to 0-chains and d2 maps
/// 2-chains to 1-chains.
struct BoundaryMatrices {
  std::array<std::vector<Cell>, 3> cells;
  SparseIntMatrix d1;
  SparseIntMatrix d2;

  /// Alternating cell count sum (-1)^k #cells[k].
  long euler_cell_count() const;
};

BoundaryMatrices boundary_matrices(const CubicalSet& s);

/// Chain complex of the quotient C(n) / C(l). Throws NotSubcomplex unless l
/// lies in n on the same grid.
BoundaryMatrices relative_complex(const CubicalSet& n, const CubicalSet& l);

/// Writes `dim,depth,i,j,axis,x_min,y_min,x_max,y_max` rows for every cell.
/// When `part` is non-empty an extra `part` column is written with that value.
void write_cells_csv(std::ostream& out, const CubicalSet& s, const std::string& part = {},
                     bool header = true);

std::string format_double(double v);

}  // namespace conley
