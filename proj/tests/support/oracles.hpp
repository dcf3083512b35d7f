#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: cells live in doubled integer coordinates, ranks come from
// dense rational elimination, and invariant factors from minors.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace oracle {

/// Elementary cube in doubled coordinates: odd coordinates span an interval,
/// even ones are degenerate. Dimension = number of odd coordinates.
struct Cube {
  int a;
  int b;
  int dim() const { return (a & 1) + (b & 1); }
  auto operator<=>(const Cube&) const = default;
};

using Complex = std::set<Cube>;

/// Closure of the unit squares (i, j) (lower-left grid corner indices).
Complex closure_of_squares(const std::vector<std::pair<int, int>>& squares);
/// Closure of arbitrary cubes.
Complex closure(const std::vector<Cube>& cubes);

/// Product-rule boundary of an elementary cube.
std::vector<std::pair<Cube, int>> boundary(const Cube& c);

std::array<long, 3> counts(const Complex& k);

using Dense = std::vector<std::vector<long>>;

/// Boundary matrix of the quotient C(k)/C(l) in degree `dim` (rows dim-1).
Dense relative_boundary(const Complex& k, const Complex& l, int dim);

long rank_q(const Dense& m);
long rank_z2(const Dense& m);

/// Betti numbers of (k, l) over Q and over Z2.
std::array<long, 3> betti_q(const Complex& k, const Complex& l);
std::array<long, 3> betti_z2(const Complex& k, const Complex& l);

/// Invariant factors from determinantal divisors: d_k = D_k / D_{k-1}, D_k the
/// gcd of all k x k minors. Small matrices only.
std::vector<mpz_class> invariant_factors(const Dense& m);

/// Invariant factors by dense elimination: move the smallest nonzero entry
/// to the pivot, reduce its row and column, repeat until it divides the rest.
std::vector<mpz_class> smith_diagonal(const Dense& m);

/// Winding number by summing wrapped angle increments on `samples` points.
double winding_by_angles(const std::function<std::array<double, 2>(double, double)>& f, double cx, double cy,
                         double r, int samples);

}  // namespace oracle
