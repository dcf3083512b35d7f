#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

Complex closure(const std::vector<Cube>& cubes) {
  Complex out;
  std::vector<Cube> todo(cubes.begin(), cubes.end());
  while (!todo.empty()) {
    const Cube c = todo.back();
    todo.pop_back();
    if (!out.insert(c).second) continue;
    for (const auto& [f, s] : boundary(c)) todo.push_back(f);
  }
  return out;
}

Complex closure_of_squares(const std::vector<std::pair<int, int>>& squares) {
  std::vector<Cube> cubes;
  for (auto [i, j] : squares) cubes.push_back({2 * i + 1, 2 * j + 1});
  return closure(cubes);
}

std::vector<std::pair<Cube, int>> boundary(const Cube& c) {
  // d(I x J) = dI x J + (-1)^{dim I} I x dJ, d[a, a+1] = [a+1] - [a].
  std::vector<std::pair<Cube, int>> out;
  if (c.a & 1) {
    out.push_back({{c.a + 1, c.b}, 1});
    out.push_back({{c.a - 1, c.b}, -1});
  }
  if (c.b & 1) {
    const int sign = (c.a & 1) ? -1 : 1;
    out.push_back({{c.a, c.b + 1}, sign});
    out.push_back({{c.a, c.b - 1}, -sign});
  }
  return out;
}

std::array<long, 3> counts(const Complex& k) {
  std::array<long, 3> n{0, 0, 0};
  for (const Cube& c : k) ++n[c.dim()];
  return n;
}

namespace {

std::vector<Cube> basis(const Complex& k, const Complex& l, int dim) {
  std::vector<Cube> out;
  for (const Cube& c : k) {
    if (c.dim() == dim && !l.count(c)) out.push_back(c);
  }
  return out;
}

}  // namespace

Dense relative_boundary(const Complex& k, const Complex& l, int dim) {
  const auto cols = basis(k, l, dim);
  const auto rows = basis(k, l, dim - 1);
  std::map<Cube, std::size_t> row_of;
  for (std::size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = r;
  Dense m(rows.size(), std::vector<long>(cols.size(), 0));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (const auto& [f, s] : boundary(cols[c])) {
      if (auto it = row_of.find(f); it != row_of.end()) m[it->second][c] += s;
    }
  }
  return m;
}

long rank_q(const Dense& m) {
  if (m.empty() || m[0].empty()) return 0;
  std::vector<std::vector<mpq_class>> a(m.size(), std::vector<mpq_class>(m[0].size()));
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m[0].size(); ++c) a[r][c] = m[r][c];
  }
  long rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a[0].size() && row < a.size(); ++col) {
    std::size_t p = row;
    while (p < a.size() && a[p][col] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    for (std::size_t r = row + 1; r < a.size(); ++r) {
      if (a[r][col] == 0) continue;
      const mpq_class f = a[r][col] / a[row][col];
      for (std::size_t c = col; c < a[0].size(); ++c) a[r][c] -= f * a[row][c];
    }
    ++row;
    ++rank;
  }
  return rank;
}

long rank_z2(const Dense& m) {
  if (m.empty() || m[0].empty()) return 0;
  std::vector<std::vector<int>> a(m.size(), std::vector<int>(m[0].size()));
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m[0].size(); ++c) a[r][c] = static_cast<int>(((m[r][c] % 2) + 2) % 2);
  }
  long rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a[0].size() && row < a.size(); ++col) {
    std::size_t p = row;
    while (p < a.size() && a[p][col] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      for (std::size_t c = col; c < a[0].size(); ++c) a[r][c] ^= a[row][c];
    }
    ++row;
    ++rank;
  }
  return rank;
}

namespace {

template <class Rank>
std::array<long, 3> betti_with(const Complex& k, const Complex& l, Rank rank) {
  std::array<long, 3> n{0, 0, 0};
  for (const Cube& c : k) {
    if (!l.count(c)) ++n[c.dim()];
  }
  const long r1 = rank(relative_boundary(k, l, 1));
  const long r2 = rank(relative_boundary(k, l, 2));
  return {n[0] - r1, n[1] - r1 - r2, n[2] - r2};
}

mpz_class det(std::vector<std::vector<mpz_class>> a) {
  // Cofactor expansion; only used on k <= 4.
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  mpz_class total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<mpz_class>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<mpz_class> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(a[r][k]);
      }
      minor.push_back(row);
    }
    const mpz_class term = a[0][c] * det(minor);
    total += (c % 2 == 0) ? term : mpz_class(-term);
  }
  return total;
}

void choose(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
            std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    choose(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::array<long, 3> betti_q(const Complex& k, const Complex& l) { return betti_with(k, l, rank_q); }
std::array<long, 3> betti_z2(const Complex& k, const Complex& l) { return betti_with(k, l, rank_z2); }

std::vector<mpz_class> invariant_factors(const Dense& m) {
  std::vector<mpz_class> out;
  if (m.empty() || m[0].empty()) return out;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  mpz_class previous = 1;
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    std::vector<std::vector<std::size_t>> rsets, csets;
    std::vector<std::size_t> cur;
    choose(rows, k, 0, cur, rsets);
    choose(cols, k, 0, cur, csets);
    mpz_class g = 0;
    for (const auto& rs : rsets) {
      for (const auto& cs : csets) {
        std::vector<std::vector<mpz_class>> sub(k, std::vector<mpz_class>(k));
        for (std::size_t a = 0; a < k; ++a) {
          for (std::size_t b = 0; b < k; ++b) sub[a][b] = m[rs[a]][cs[b]];
        }
        mpz_class d = det(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      }
    }
    if (g == 0) break;
    out.push_back(g / previous);
    previous = g;
  }
  return out;
}

std::vector<mpz_class> smith_diagonal(const Dense& m) {
  std::vector<mpz_class> out;
  if (m.empty() || m[0].empty()) return out;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = m[r][c];
  }
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // Smallest nonzero entry of the trailing block.
      std::size_t pr = rows, pc = cols;
      for (std::size_t r = t; r < rows; ++r) {
        for (std::size_t c = t; c < cols; ++c) {
          if (a[r][c] != 0 && (pr == rows || abs(a[r][c]) < abs(a[pr][pc]))) pr = r, pc = c;
        }
      }
      if (pr == rows) return out;
      std::swap(a[t], a[pr]);
      for (auto& row : a) std::swap(row[t], row[pc]);
      bool clean = true;
      for (std::size_t r = t + 1; r < rows; ++r) {
        const mpz_class q = a[r][t] / a[t][t];
        for (std::size_t c = t; c < cols; ++c) a[r][c] -= q * a[t][c];
        if (a[r][t] != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < cols; ++c) {
        const mpz_class q = a[t][c] / a[t][t];
        for (std::size_t r = t; r < rows; ++r) a[r][c] -= q * a[r][t];
        if (a[t][c] != 0) clean = false;
      }
      if (!clean) continue;
      // Pivot must divide the trailing block; otherwise fold an offending row in.
      std::size_t bad = rows;
      for (std::size_t r = t + 1; r < rows && bad == rows; ++r) {
        for (std::size_t c = t + 1; c < cols; ++c) {
          if (a[r][c] % a[t][t] != 0) {
            bad = r;
            break;
          }
        }
      }
      if (bad == rows) break;
      for (std::size_t c = t; c < cols; ++c) a[t][c] += a[bad][c];
    }
    out.push_back(abs(a[t][t]));
  }
  return out;
}

double winding_by_angles(const std::function<std::array<double, 2>(double, double)>& f, double cx, double cy,
                         double r, int samples) {
  double total = 0.0;
  double prev = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / samples;
    const auto v = f(cx + r * std::cos(t), cy + r * std::sin(t));
    const double angle = std::atan2(v[1], v[0]);
    if (k > 0) {
      double d = angle - prev;
      while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
      while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
      total += d;
    }
    prev = angle;
  }
  return total / (2.0 * std::numbers::pi);
}

}  // namespace oracle
