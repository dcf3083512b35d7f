#include "conley/complex.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "conley/errors.hpp"

namespace conley {

void Rect::validate() const {
  if (!(x0 < x1) || !(y0 < y1)) {
    throw std::invalid_argument("rectangle requires x0 < x1 and y0 < y1");
  }
}

Point vertex_point(const Rect& rect, int depth, int i, int j) {
  const double n = static_cast<double>(1 << depth);
  // Endpoints are hit exactly so neighbouring rectangles share coordinates.
  const double x = i == 0 ? rect.x0 : (i == (1 << depth) ? rect.x1 : rect.x0 + (rect.x1 - rect.x0) * (i / n));
  const double y = j == 0 ? rect.y0 : (j == (1 << depth) ? rect.y1 : rect.y0 + (rect.y1 - rect.y0) * (j / n));
  return {x, y};
}

CellBox geometry(const Rect& rect, int depth, const Cell& c) {
  const Point lo = vertex_point(rect, depth, c.i, c.j);
  int di = 0;
  int dj = 0;
  if (c.dim == 2) {
    di = dj = 1;
  } else if (c.dim == 1) {
    (c.axis == Axis::Horizontal ? di : dj) = 1;
  }
  const Point hi = vertex_point(rect, depth, c.i + di, c.j + dj);
  return {lo.x, lo.y, hi.x, hi.y};
}

std::vector<std::pair<Cell, int>> boundary(const Cell& c) {
  if (c.dim == 2) {
    return {{Cell::hedge(c.i, c.j), +1},
            {Cell::vedge(c.i + 1, c.j), +1},
            {Cell::hedge(c.i, c.j + 1), -1},
            {Cell::vedge(c.i, c.j), -1}};
  }
  if (c.dim == 1) {
    if (c.axis == Axis::Horizontal) return {{Cell::vertex(c.i + 1, c.j), +1}, {Cell::vertex(c.i, c.j), -1}};
    return {{Cell::vertex(c.i, c.j + 1), +1}, {Cell::vertex(c.i, c.j), -1}};
  }
  return {};
}

CubicalSet::CubicalSet(Rect rect, int depth) : rect_(rect), depth_(depth) {
  rect_.validate();
  if (depth < 0 || depth > kMaxDepth) throw std::invalid_argument("depth out of range");
  n_ = 1 << depth;
  const std::size_t v = static_cast<std::size_t>(n_ + 1) * (n_ + 1);
  bits_[0].assign(v, 0);
  bits_[1].assign(2 * v, 0);
  bits_[2].assign(static_cast<std::size_t>(n_) * n_, 0);
}

CubicalSet CubicalSet::from_cells(Rect rect, int depth, const std::vector<Cell>& cells) {
  CubicalSet s(rect, depth);
  for (const Cell& c : cells) s.insert(c);
  return s;
}

bool CubicalSet::valid(const Cell& c) const {
  switch (c.dim) {
    case 0: return c.i >= 0 && c.j >= 0 && c.i <= n_ && c.j <= n_;
    case 1:
      if (c.axis == Axis::Horizontal) return c.i >= 0 && c.j >= 0 && c.i < n_ && c.j <= n_;
      return c.i >= 0 && c.j >= 0 && c.i <= n_ && c.j < n_;
    case 2: return c.i >= 0 && c.j >= 0 && c.i < n_ && c.j < n_;
    default: return false;
  }
}

std::size_t CubicalSet::index(const Cell& c) const {
  const std::size_t row = static_cast<std::size_t>(c.j);
  switch (c.dim) {
    case 0: return row * (n_ + 1) + c.i;
    case 1: return (row * (n_ + 1) + c.i) * 2 + static_cast<std::size_t>(c.axis);
    default: return row * n_ + c.i;
  }
}

Cell CubicalSet::cell_at(int dim, std::size_t idx) const {
  switch (dim) {
    case 0: return Cell::vertex(static_cast<int>(idx % (n_ + 1)), static_cast<int>(idx / (n_ + 1)));
    case 1: {
      const std::size_t base = idx / 2;
      const auto axis = static_cast<Axis>(idx % 2);
      return {1, static_cast<int>(base % (n_ + 1)), static_cast<int>(base / (n_ + 1)), axis};
    }
    default: return Cell::square(static_cast<int>(idx % n_), static_cast<int>(idx / n_));
  }
}

bool CubicalSet::contains(const Cell& c) const { return valid(c) && bits_[c.dim][index(c)] != 0; }

void CubicalSet::insert(const Cell& c) {
  if (!valid(c)) throw std::out_of_range("cell outside the grid");
  auto& bit = bits_[c.dim][index(c)];
  if (bit) return;
  bit = 1;
  ++counts_[c.dim];
  for (const auto& [face, coeff] : boundary(c)) insert(face);
}

std::vector<Cell> CubicalSet::cells(int dim) const {
  std::vector<Cell> out;
  out.reserve(counts_[dim]);
  const auto& b = bits_[dim];
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (b[k]) out.push_back(cell_at(dim, k));
  }
  return out;
}

bool CubicalSet::subset_of(const CubicalSet& other) const {
  if (!same_grid(other)) return false;
  for (int d = 0; d < 3; ++d) {
    for (std::size_t k = 0; k < bits_[d].size(); ++k) {
      if (bits_[d][k] && !other.bits_[d][k]) return false;
    }
  }
  return true;
}

CubicalSet CubicalSet::united(const CubicalSet& other) const {
  if (!same_grid(other)) throw std::invalid_argument("cubical sets live on different grids");
  CubicalSet out = *this;
  for (int d = 0; d < 3; ++d) {
    out.counts_[d] = 0;
    for (std::size_t k = 0; k < bits_[d].size(); ++k) {
      out.bits_[d][k] = bits_[d][k] | other.bits_[d][k];
      out.counts_[d] += out.bits_[d][k];
    }
  }
  return out;
}

CubicalSet CubicalSet::intersected(const CubicalSet& other) const {
  if (!same_grid(other)) throw std::invalid_argument("cubical sets live on different grids");
  CubicalSet out = *this;
  for (int d = 0; d < 3; ++d) {
    out.counts_[d] = 0;
    for (std::size_t k = 0; k < bits_[d].size(); ++k) {
      out.bits_[d][k] = bits_[d][k] & other.bits_[d][k];
      out.counts_[d] += out.bits_[d][k];
    }
  }
  return out;
}

CubicalSet build_set(const Rect& rect, int depth, const PointPredicate& predicate, int max_depth) {
  if (depth < 0 || depth > std::min(max_depth, kMaxDepth)) {
    throw std::invalid_argument("depth " + std::to_string(depth) + " outside [0, " +
                                std::to_string(std::min(max_depth, kMaxDepth)) + "]");
  }
  CubicalSet s(rect, depth);
  const int n = s.resolution();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Cell sq = Cell::square(i, j);
      if (predicate(geometry(rect, depth, sq).center())) s.insert(sq);
    }
  }
  if (s.empty()) throw EmptySet("no grid square satisfies the shape predicate at depth " + std::to_string(depth));
  return s;
}

long BoundaryMatrices::euler_cell_count() const {
  return static_cast<long>(cells[0].size()) - static_cast<long>(cells[1].size()) +
         static_cast<long>(cells[2].size());
}

namespace {

SparseIntMatrix assemble(const std::vector<Cell>& domain, const std::vector<Cell>& codomain) {
  SparseIntMatrix m(static_cast<int>(codomain.size()), static_cast<int>(domain.size()));
  for (std::size_t c = 0; c < domain.size(); ++c) {
    for (const auto& [face, coeff] : boundary(domain[c])) {
      auto it = std::lower_bound(codomain.begin(), codomain.end(), face);
      if (it != codomain.end() && *it == face) {
        m.add(static_cast<int>(it - codomain.begin()), static_cast<int>(c), coeff);
      }
    }
  }
  return m;
}

}  // namespace

BoundaryMatrices boundary_matrices(const CubicalSet& s) {
  BoundaryMatrices bm;
  for (int d = 0; d < 3; ++d) bm.cells[d] = s.cells(d);
  bm.d1 = assemble(bm.cells[1], bm.cells[0]);
  bm.d2 = assemble(bm.cells[2], bm.cells[1]);
  return bm;
}

BoundaryMatrices relative_complex(const CubicalSet& n, const CubicalSet& l) {
  if (!l.subset_of(n)) throw NotSubcomplex("L is not a subcomplex of N on the same grid");
  BoundaryMatrices bm;
  for (int d = 0; d < 3; ++d) {
    for (const Cell& c : n.cells(d)) {
      if (!l.contains(c)) bm.cells[d].push_back(c);
    }
  }
  bm.d1 = assemble(bm.cells[1], bm.cells[0]);
  bm.d2 = assemble(bm.cells[2], bm.cells[1]);
  return bm;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_cells_csv(std::ostream& out, const CubicalSet& s, const std::string& part, bool header) {
  if (header) {
    out << "dim,depth,i,j,axis,x_min,y_min,x_max,y_max";
    if (!part.empty()) out << ",part";
    out << '\n';
  }
  for (int d = 0; d < 3; ++d) {
    for (const Cell& c : s.cells(d)) {
      const CellBox b = geometry(s.rect(), s.depth(), c);
      const char* axis = d != 1 ? "none" : (c.axis == Axis::Horizontal ? "h" : "v");
      out << d << ',' << s.depth() << ',' << c.i << ',' << c.j << ',' << axis << ','
          << format_double(b.x_min) << ',' << format_double(b.y_min) << ','
          << format_double(b.x_max) << ',' << format_double(b.y_max);
      if (!part.empty()) out << ',' << part;
      out << '\n';
    }
  }
}

}  // namespace conley
