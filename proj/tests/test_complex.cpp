#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "bridge.hpp"
#include "conley/complex.hpp"
#include "conley/errors.hpp"
#include "oracles.hpp"

using namespace conley;

namespace {

const Rect kSquare{-1, 1, -1, 1};
auto always = [](Point) { return true; };

std::array<long, 3> counts(const CubicalSet& s) {
  return {static_cast<long>(s.count(0)), static_cast<long>(s.count(1)), static_cast<long>(s.count(2))};
}

}  // namespace

TEST(BuildSet, DepthZeroIsOneClosedSquare) {
  const CubicalSet s = build_set(kSquare, 0, always);
  EXPECT_EQ(counts(s), (std::array<long, 3>{4, 4, 1}));
}

TEST(BuildSet, FullDepthOneGrid) {
  const CubicalSet s = build_set(kSquare, 1, always);
  const auto expected = oracle::counts(oracle::closure_of_squares({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  EXPECT_EQ(counts(s), expected);
  EXPECT_EQ(counts(s), (std::array<long, 3>{9, 12, 4}));
}

TEST(BuildSet, LeftHalf) {
  const CubicalSet s = build_set(kSquare, 1, [](Point p) { return p.x < 0; });
  EXPECT_EQ(counts(s), oracle::counts(oracle::closure_of_squares({{0, 0}, {0, 1}})));
  EXPECT_EQ(counts(s), (std::array<long, 3>{6, 7, 2}));
}

TEST(BuildSet, Errors) {
  EXPECT_THROW(build_set(kSquare, 2, [](Point) { return false; }), EmptySet);
  EXPECT_THROW(build_set(kSquare, 13, always), std::invalid_argument);
  EXPECT_THROW(build_set(kSquare, -1, always), std::invalid_argument);
  EXPECT_THROW(build_set(Rect{1, -1, 0, 1}, 1, always), std::invalid_argument);
}

TEST(Geometry, VerticesHitRectEndpoints) {
  const Rect r{-0.3, 0.7, 0.1, 0.2};
  EXPECT_EQ(vertex_point(r, 5, 32, 32), (Point{0.7, 0.2}));
  EXPECT_EQ(vertex_point(r, 5, 0, 0), (Point{-0.3, 0.1}));
}

TEST(CanonicalOrder, DimThenRowThenColumn) {
  CubicalSet s(kSquare, 1);
  s.insert(Cell::square(1, 0));
  s.insert(Cell::square(0, 1));
  const auto sq = s.cells(2);
  ASSERT_EQ(sq.size(), 2u);
  EXPECT_EQ(sq[0], Cell::square(1, 0));
  EXPECT_EQ(sq[1], Cell::square(0, 1));
  EXPECT_LT(Cell::vertex(1, 1), Cell::hedge(0, 0));
  EXPECT_LT(Cell::hedge(0, 0), Cell::vedge(0, 0));
}

TEST(Boundary, SingleSquare) {
  const BoundaryMatrices bm = boundary_matrices(build_set(kSquare, 0, always));
  EXPECT_EQ(bm.d2.rows(), 4);
  EXPECT_EQ(bm.d2.cols(), 1);
  for (int r = 0; r < 4; ++r) EXPECT_EQ(std::abs(bm.d2.at(r, 0)), 1);
  EXPECT_TRUE(bm.d1.multiply(bm.d2).is_zero());
}

TEST(Boundary, FullDepthOneGrid) {
  const BoundaryMatrices bm = boundary_matrices(build_set(kSquare, 1, always));
  EXPECT_EQ(bm.d2.rows(), 12);
  EXPECT_EQ(bm.d2.cols(), 4);
  for (int c = 0; c < 4; ++c) EXPECT_EQ(bm.d2.column(c).size(), 4u);
}

TEST(Boundary, SingleEdgeRunsFromLowToHighEnd) {
  // Edges are oriented by increasing coordinate: d(edge) = end - start.
  const CubicalSet s = CubicalSet::from_cells(kSquare, 1, {Cell::hedge(0, 0)});
  const BoundaryMatrices bm = boundary_matrices(s);
  EXPECT_EQ(bm.d2.cols(), 0);
  ASSERT_EQ(bm.d1.rows(), 2);
  ASSERT_EQ(bm.d1.cols(), 1);
  EXPECT_EQ(bm.d1.at(0, 0), -1);
  EXPECT_EQ(bm.d1.at(1, 0), 1);
}

TEST(Boundary, MatchesProductRuleOracle) {
  const Cell sq = Cell::square(3, 5);
  std::map<oracle::Cube, int> mine;
  for (const auto& [f, s] : boundary(sq)) mine[oracle::to_cube(f)] = s;
  std::map<oracle::Cube, int> theirs;
  for (const auto& [f, s] : oracle::boundary(oracle::to_cube(sq))) theirs[f] = s;
  EXPECT_EQ(mine, theirs);
}

TEST(Relative, SquareRelBoundary) {
  const CubicalSet n = build_set(kSquare, 0, always);
  CubicalSet l(kSquare, 0);
  for (const Cell& e : n.cells(1)) l.insert(e);
  const BoundaryMatrices q = relative_complex(n, l);
  EXPECT_EQ(q.cells[2].size(), 1u);
  EXPECT_TRUE(q.cells[1].empty());
  EXPECT_TRUE(q.cells[0].empty());
  EXPECT_TRUE(q.d2.is_zero());
}

TEST(Relative, SquareRelOneEdge) {
  const CubicalSet n = build_set(kSquare, 0, always);
  const CubicalSet l = CubicalSet::from_cells(kSquare, 0, {Cell::hedge(0, 0)});
  const BoundaryMatrices q = relative_complex(n, l);
  EXPECT_EQ(q.cells[2].size(), 1u);
  EXPECT_EQ(q.cells[1].size(), 3u);
  EXPECT_EQ(q.cells[0].size(), 2u);
}

TEST(Relative, EmptyLIsAbsolute) {
  const CubicalSet n = build_set(kSquare, 2, [](Point p) { return p.x + p.y < 0.3; });
  const BoundaryMatrices a = boundary_matrices(n);
  const BoundaryMatrices b = relative_complex(n, CubicalSet(kSquare, 2));
  EXPECT_EQ(a.cells, b.cells);
  EXPECT_EQ(a.d1, b.d1);
  EXPECT_EQ(a.d2, b.d2);
}

TEST(Relative, RejectsNonSubcomplex) {
  const CubicalSet n = build_set(kSquare, 1, [](Point p) { return p.x < 0; });
  const CubicalSet l = CubicalSet::from_cells(kSquare, 1, {Cell::hedge(1, 0)});
  EXPECT_THROW(relative_complex(n, l), NotSubcomplex);
  EXPECT_THROW(relative_complex(n, CubicalSet(kSquare, 2)), NotSubcomplex);
}

TEST(CellsCsv, HeaderAndPart) {
  std::ostringstream out;
  write_cells_csv(out, build_set(kSquare, 0, always), "N");
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "dim,depth,i,j,axis,x_min,y_min,x_max,y_max,part");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 9);
}

// Property: the closure and counts agree with the doubled-coordinate oracle,
// and boundary of boundary vanishes, on random square sets.
TEST(Property, RandomComplexes) {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    const int depth = 1 + static_cast<int>(rng() % 4);
    const int n = 1 << depth;
    const double density = 0.2 + 0.6 * (rng() % 100) / 100.0;
    std::vector<Cell> cells;
    std::vector<std::pair<int, int>> squares;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if ((rng() % 1000) / 1000.0 < density) {
          cells.push_back(Cell::square(i, j));
          squares.push_back({i, j});
        }
      }
    }
    // A few loose edges too.
    for (int k = 0; k < 3; ++k) cells.push_back(Cell::vedge(static_cast<int>(rng() % (n + 1)), static_cast<int>(rng() % n)));
    const CubicalSet s = CubicalSet::from_cells(kSquare, depth, cells);
    EXPECT_EQ(oracle::to_complex(s), oracle::closure([&] {
                std::vector<oracle::Cube> cubes;
                for (const Cell& c : cells) cubes.push_back(oracle::to_cube(c));
                return cubes;
              }()));
    const BoundaryMatrices bm = boundary_matrices(s);
    ASSERT_TRUE(bm.d1.multiply(bm.d2).is_zero()) << "trial " << trial;
  }
}
