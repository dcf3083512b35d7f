#include <gtest/gtest.h>

#include <random>

#include "bridge.hpp"
#include "conley/homology.hpp"
#include "oracles.hpp"

using namespace conley;

namespace {

const Rect kSquare{-1, 1, -1, 1};

std::vector<std::vector<long>> to_long_dense(const SparseIntMatrix& m) {
  std::vector<std::vector<long>> out;
  for (const auto& row : m.to_dense()) out.emplace_back(row.begin(), row.end());
  return out;
}

SparseIntMatrix random_matrix(std::mt19937& rng, int rows, int cols, int range, double density) {
  SparseIntMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if ((rng() % 1000) / 1000.0 < density) m.add(r, c, static_cast<long>(rng() % (2 * range + 1)) - range);
    }
  }
  return m;
}

}  // namespace

TEST(Smith, Identity) {
  const SmithResult s = smith_normal_form(SparseIntMatrix::from_dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  EXPECT_EQ(s.rank, 3);
  EXPECT_EQ(s.diagonal, (std::vector<mpz_class>{1, 1, 1}));
}

TEST(Smith, Zero) {
  const SmithResult s = smith_normal_form(SparseIntMatrix(3, 2));
  EXPECT_EQ(s.rank, 0);
  EXPECT_TRUE(s.diagonal.empty());
}

TEST(Smith, TwoByTwo) {
  const SmithResult s = smith_normal_form(SparseIntMatrix::from_dense({{2, 4}, {6, 8}}));
  EXPECT_EQ(s.rank, 2);
  EXPECT_EQ(s.diagonal, (std::vector<mpz_class>{2, 4}));
}

TEST(Smith, NeedsLcmNormalization) {
  // diag(2, 3) is not a divisibility chain; the normal form is diag(1, 6).
  const SmithResult s = smith_normal_form(SparseIntMatrix::from_dense({{2, 0}, {0, 3}}));
  EXPECT_EQ(s.diagonal, (std::vector<mpz_class>{1, 6}));
}

TEST(Smith, LargeEntriesStayExact) {
  const long big = 3037000493L;  // prime, big * big overflows int64
  const SmithResult s = smith_normal_form(SparseIntMatrix::from_dense({{big, 0}, {0, big}}));
  EXPECT_EQ(s.diagonal[1], mpz_class(big));
  const SmithResult t = smith_normal_form(SparseIntMatrix::from_dense({{big, 1}, {0, big}}));
  EXPECT_EQ(t.diagonal[1], mpz_class(big) * big);
}

TEST(Smith, Rank2Matches) {
  EXPECT_EQ(rank_mod2(SparseIntMatrix::from_dense({{2, 4}, {6, 8}})), 0);
  EXPECT_EQ(rank_mod2(SparseIntMatrix::from_dense({{1, 1}, {1, 1}})), 1);
  EXPECT_EQ(rank_mod2(SparseIntMatrix::from_dense({{1, 0}, {0, 3}})), 2);
}

// Property: invariant factors agree with the determinantal-divisor oracle,
// form a divisibility chain, and the Z2 rank equals the number of odd factors.
TEST(Property, SmithAgainstMinors) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + static_cast<int>(rng() % 4);
    const int cols = 1 + static_cast<int>(rng() % 4);
    const SparseIntMatrix m = random_matrix(rng, rows, cols, 6, 0.7);
    const SmithResult s = smith_normal_form(m);
    const auto oracle_factors = oracle::invariant_factors(to_long_dense(m));
    ASSERT_EQ(s.diagonal, oracle_factors) << "trial " << trial;
    EXPECT_EQ(s.rank, oracle::rank_q(to_long_dense(m)));
    for (std::size_t k = 1; k < s.diagonal.size(); ++k) {
      EXPECT_EQ(s.diagonal[k] % s.diagonal[k - 1], 0);
    }
    long odd = 0;
    for (const auto& d : s.diagonal) odd += (d % 2 != 0) ? 1 : 0;
    EXPECT_EQ(rank_mod2(m), odd);
    EXPECT_EQ(rank_mod2(m), oracle::rank_z2(to_long_dense(m)));
  }
}

// Property: unimodular row and column operations leave the normal form fixed.
TEST(Property, SmithUnimodularInvariance) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 2 + static_cast<int>(rng() % 6);
    const int cols = 2 + static_cast<int>(rng() % 6);
    const SparseIntMatrix m = random_matrix(rng, rows, cols, 9, 0.5);
    auto dense = m.to_dense();
    for (int op = 0; op < 10; ++op) {
      const int k = static_cast<int>(rng() % 3);
      const std::int64_t f = static_cast<std::int64_t>(rng() % 7) - 3;
      if (k == 0) {
        const int a = static_cast<int>(rng() % rows), b = static_cast<int>(rng() % rows);
        if (a != b) {
          for (int c = 0; c < cols; ++c) dense[a][c] += f * dense[b][c];
        }
      } else if (k == 1) {
        const int a = static_cast<int>(rng() % cols), b = static_cast<int>(rng() % cols);
        if (a != b) {
          for (int r = 0; r < rows; ++r) dense[r][a] += f * dense[r][b];
        }
      } else {
        const int a = static_cast<int>(rng() % rows);
        for (int c = 0; c < cols; ++c) dense[a][c] = -dense[a][c];
      }
    }
    EXPECT_EQ(smith_normal_form(SparseIntMatrix::from_dense(dense)).diagonal, smith_normal_form(m).diagonal)
        << "trial " << trial;
  }
}

TEST(RelativeHomology, SquareRelBoundary) {
  const CubicalSet n = build_set(kSquare, 0, [](Point) { return true; });
  CubicalSet l(kSquare, 0);
  for (const Cell& e : n.cells(1)) l.insert(e);
  const HomologySummary h = relative_homology(n, l);
  EXPECT_EQ(h.betti(), (std::array<long, 3>{0, 0, 1}));
}

TEST(RelativeHomology, SquareRelOneEdge) {
  const CubicalSet n = build_set(kSquare, 0, [](Point) { return true; });
  const HomologySummary h = relative_homology(n, CubicalSet::from_cells(kSquare, 0, {Cell::hedge(0, 0)}));
  EXPECT_EQ(h.betti(), (std::array<long, 3>{0, 0, 0}));
}

TEST(RelativeHomology, SquareRelOppositeEdges) {
  const CubicalSet n = build_set(kSquare, 0, [](Point) { return true; });
  const CubicalSet l = CubicalSet::from_cells(kSquare, 0, {Cell::vedge(0, 0), Cell::vedge(1, 0)});
  const HomologySummary h = relative_homology(n, l);
  EXPECT_EQ(h.betti(), (std::array<long, 3>{0, 1, 0}));
  EXPECT_EQ(h.euler, -1);
}

TEST(RelativeHomology, AnnulusAbsolute) {
  const CubicalSet n = build_set(kSquare, 2, [](Point p) { return std::max(std::abs(p.x), std::abs(p.y)) > 0.5; });
  const HomologySummary h = relative_homology(n, CubicalSet(kSquare, 2));
  EXPECT_EQ(h.betti(), (std::array<long, 3>{1, 1, 0}));
  EXPECT_EQ(h.euler, 0);
}

TEST(RelativeHomology, Z2Only) {
  const CubicalSet n = build_set(kSquare, 1, [](Point) { return true; });
  const HomologySummary h = relative_homology(n, CubicalSet(kSquare, 1), Coefficients::Z2);
  EXPECT_FALSE(h.betti_q.has_value());
  EXPECT_EQ(h.betti_z2, (std::array<long, 3>{1, 0, 0}));
}

TEST(Torsion, ProjectivePlaneLikeComplex) {
  // One vertex, one loop, one disc attached twice along the loop: H1 = Z/2.
  BoundaryMatrices bm;
  bm.cells[0] = {Cell::vertex(0, 0)};
  bm.cells[1] = {Cell::hedge(0, 0)};
  bm.cells[2] = {Cell::square(0, 0)};
  bm.d1 = SparseIntMatrix(1, 1);
  bm.d2 = SparseIntMatrix::from_dense({{2}});
  const HomologySummary h = homology_of(bm);
  EXPECT_EQ(*h.betti_q, (std::array<long, 3>{1, 0, 0}));
  EXPECT_EQ(h.betti_z2, (std::array<long, 3>{1, 1, 1}));
  EXPECT_EQ(h.torsion[1], (std::vector<std::uint64_t>{2}));
}

TEST(Torsion, PrimePowers) {
  EXPECT_EQ(prime_power_factors(12), (std::vector<std::uint64_t>{3, 4}));
  EXPECT_EQ(prime_power_factors(1), (std::vector<std::uint64_t>{}));
  EXPECT_EQ(prime_power_factors(97), (std::vector<std::uint64_t>{97}));
}

TEST(Poincare, Examples) {
  HomologySummary h;
  h.betti_q = std::array<long, 3>{0, 1, 0};
  EXPECT_EQ(poly::eval(poincare_polynomial(h), -1), -1);
  h.betti_q = std::array<long, 3>{1, 0, 0};
  EXPECT_EQ(poly::trim(poincare_polynomial(h)), (std::vector<long>{1}));
  h.betti_q = std::array<long, 3>{0, 2, 0};
  EXPECT_EQ(poly::eval(poincare_polynomial(h), -1), -2);
}

TEST(Poly, DivideByOnePlusT) {
  auto [q, r] = poly::divide_by_one_plus_t({0, 1, 1});
  EXPECT_EQ(poly::trim(q), (std::vector<long>{0, 1}));
  EXPECT_EQ(r, 0);
  auto [q2, r2] = poly::divide_by_one_plus_t({1, 1});
  EXPECT_EQ(poly::trim(q2), (std::vector<long>{1}));
  EXPECT_EQ(r2, 0);
  EXPECT_NE(poly::divide_by_one_plus_t({1, 0, 1}).second, 0);
}

// Property: Betti numbers of random pairs agree with the dense oracle over Q
// and Z2, and chi from homology equals chi from cell counts.
TEST(Property, RelativeHomologyAgainstOracle) {
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 200; ++trial) {
    const int depth = 1 + static_cast<int>(rng() % 3);
    const int n = 1 << depth;
    std::vector<Cell> squares;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (rng() % 3 != 0) squares.push_back(Cell::square(i, j));
      }
    }
    if (squares.empty()) squares.push_back(Cell::square(0, 0));
    const CubicalSet big = CubicalSet::from_cells(kSquare, depth, squares);
    std::vector<Cell> sub;
    for (int d = 0; d < 3; ++d) {
      for (const Cell& c : big.cells(d)) {
        if (rng() % 5 == 0) sub.push_back(c);
      }
    }
    const CubicalSet small = CubicalSet::from_cells(kSquare, depth, sub);
    const HomologySummary h = relative_homology(big, small);
    const auto k = oracle::to_complex(big);
    const auto l = oracle::to_complex(small);
    ASSERT_EQ(*h.betti_q, oracle::betti_q(k, l)) << "trial " << trial;
    ASSERT_EQ(h.betti_z2, oracle::betti_z2(k, l)) << "trial " << trial;
    EXPECT_EQ(h.euler, h.cell_euler);
  }
}

// The two test oracles (minors and dense elimination) agree with each other.
TEST(Property, OraclesAgree) {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    const int rows = 1 + static_cast<int>(rng() % 4), cols = 1 + static_cast<int>(rng() % 4);
    oracle::Dense m(rows, std::vector<long>(cols));
    for (auto& row : m) {
      for (auto& v : row) v = static_cast<long>(rng() % 13) - 6;
    }
    ASSERT_EQ(oracle::smith_diagonal(m), oracle::invariant_factors(m)) << "trial " << trial;
  }
}
