#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "conley/complex.hpp"
#include "conley/matrix.hpp"

namespace conley {

/// Invariant factors d_1 | d_2 | ... | d_r of an integer matrix.
struct SmithResult {
  std::vector<mpz_class> diagonal;
  int rank = 0;
  int rows = 0;
  int cols = 0;
};

/// Exact Smith normal form with smallest-absolute-value pivoting over GMP
/// integers. The returned diagonal is positive and forms a divisibility chain.
SmithResult smith_normal_form(const SparseIntMatrix& m);

/// Rank over the two-element field by column reduction.
int rank_mod2(const SparseIntMatrix& m);

enum class Coefficients { Z, Z2 };

struct HomologySummary {
  /// Ranks over the rationals; absent when only Z2 was requested.
  std::optional<std::array<long, 3>> betti_q;
  std::array<long, 3> betti_z2{0, 0, 0};
  /// Prime-power torsion coefficients of H_k, k = 0, 1, 2.
  std::array<std::vector<std::uint64_t>, 3> torsion;
  long euler = 0;
  /// Alternating count of the cells of the quotient complex.
  long cell_euler = 0;

  /// Rational Betti numbers when present, Z2 ones otherwise.
  const std::array<long, 3>& betti() const { return betti_q ? *betti_q : betti_z2; }
};

/// Homology of the pair (n, l) via the quotient complex C(n)/C(l).
/// Requesting Z also fills the Z2 Betti numbers.
HomologySummary relative_homology(const CubicalSet& n, const CubicalSet& l,
                                  Coefficients coefficients = Coefficients::Z);

/// Homology of a chain complex given by its boundary matrices.
HomologySummary homology_of(const BoundaryMatrices& bm, Coefficients coefficients = Coefficients::Z);

/// Coefficients [b0, b1, b2] of p(t).
std::vector<long> poincare_polynomial(const HomologySummary& h);

/// Prime-power decomposition of n > 1 (e.g. 12 -> {3, 4}).
std::vector<std::uint64_t> prime_power_factors(std::uint64_t n);

/// Integer polynomial helpers, coefficient i is the coefficient of t^i.
namespace poly {
std::vector<long> add(std::vector<long> a, const std::vector<long>& b);
std::vector<long> sub(std::vector<long> a, const std::vector<long>& b);
long eval(const std::vector<long>& p, long t);
/// Quotient and remainder of division by (1 + t).
std::pair<std::vector<long>, long> divide_by_one_plus_t(const std::vector<long>& p);
std::vector<long> trim(std::vector<long> p);
}  // namespace poly

}  // namespace conley
