#include "conley/homology.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "conley/errors.hpp"

namespace conley {

namespace {

// Working copy of a matrix for elimination: rows as ordered maps, columns as
// row-index sets so both directions can be walked.
class EliminationMatrix {
 public:
  explicit EliminationMatrix(const SparseIntMatrix& m)
      : rows_(m.rows()), cols_(m.cols()), row_alive_(m.rows(), 1), col_alive_(m.cols(), 1) {
    for (int c = 0; c < m.cols(); ++c) {
      for (const auto& [r, v] : m.column(c)) {
        rows_[r].emplace(c, mpz_class(static_cast<long>(v)));
        cols_[c].insert(r);
      }
    }
  }

  int num_cols() const { return static_cast<int>(cols_.size()); }

  const mpz_class& at(int r, int c) const { return rows_[r].at(c); }

  // row_dst -= q * row_src
  void row_axpy(int dst, int src, const mpz_class& q) {
    if (q == 0) return;
    auto& d = rows_[dst];
    for (const auto& [c, v] : rows_[src]) {
      auto it = d.find(c);
      if (it == d.end()) {
        d.emplace(c, -q * v);
        cols_[c].insert(dst);
      } else {
        it->second -= q * v;
        if (it->second == 0) {
          d.erase(it);
          cols_[c].erase(dst);
        }
      }
    }
  }

  // Only valid when column `c` has its single entry in row `r`: subtracting
  // q * column c from column c2 then only touches entry (r, c2).
  void reduce_entry(int r, int c2, const mpz_class& remainder) {
    auto& row = rows_[r];
    if (remainder == 0) {
      row.erase(c2);
      cols_[c2].erase(r);
    } else {
      row[c2] = remainder;
    }
  }

  void kill(int r, int c) {
    for (const auto& [cc, v] : rows_[r]) {
      if (cc != c) cols_[cc].erase(r);
    }
    rows_[r].clear();
    cols_[c].clear();
    row_alive_[r] = 0;
    col_alive_[c] = 0;
  }

  const std::set<int>& column_rows(int c) const { return cols_[c]; }
  const std::map<int, mpz_class>& row(int r) const { return rows_[r]; }
  bool col_alive(int c) const { return col_alive_[c] != 0; }

 private:
  std::vector<std::map<int, mpz_class>> rows_;
  std::vector<std::set<int>> cols_;
  std::vector<char> row_alive_;
  std::vector<char> col_alive_;
};

struct Pivot {
  int row = -1;
  int col = -1;
};

// Smallest |value| in the sparsest non-empty column, ties broken by the
// shortest row. Falls back to a global scan when that column has no unit.
Pivot choose_pivot(const EliminationMatrix& m) {
  int best_col = -1;
  std::size_t best_size = 0;
  for (int c = 0; c < m.num_cols(); ++c) {
    if (!m.col_alive(c)) continue;
    const std::size_t sz = m.column_rows(c).size();
    if (sz == 0) continue;
    if (best_col < 0 || sz < best_size) {
      best_col = c;
      best_size = sz;
      if (sz == 1) break;
    }
  }
  if (best_col < 0) return {};

  auto scan_column = [&](int c, Pivot& p, mpz_class& best_abs, std::size_t& best_row_len) {
    for (int r : m.column_rows(c)) {
      mpz_class a = abs(m.at(r, c));
      const std::size_t len = m.row(r).size();
      if (p.row < 0 || a < best_abs || (a == best_abs && len < best_row_len)) {
        p = {r, c};
        best_abs = a;
        best_row_len = len;
      }
    }
  };

  Pivot p;
  mpz_class best_abs;
  std::size_t best_row_len = 0;
  scan_column(best_col, p, best_abs, best_row_len);
  if (best_abs == 1) return p;
  for (int c = 0; c < m.num_cols(); ++c) {
    if (m.col_alive(c) && !m.column_rows(c).empty()) scan_column(c, p, best_abs, best_row_len);
  }
  return p;
}

std::vector<mpz_class> divisibility_chain(std::vector<mpz_class> d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      mpz_class g;
      mpz_class l;
      mpz_gcd(g.get_mpz_t(), d[i].get_mpz_t(), d[j].get_mpz_t());
      mpz_lcm(l.get_mpz_t(), d[i].get_mpz_t(), d[j].get_mpz_t());
      d[i] = g;
      d[j] = l;
    }
  }
  return d;
}

}  // namespace

SmithResult smith_normal_form(const SparseIntMatrix& input) {
  SmithResult result;
  result.rows = input.rows();
  result.cols = input.cols();
  EliminationMatrix m(input);
  std::vector<mpz_class> diag;

  for (Pivot p = choose_pivot(m); p.row >= 0; p = choose_pivot(m)) {
    int r = p.row;
    int c = p.col;
    for (;;) {
      // Clear column c below/above the pivot; a nonzero remainder becomes the
      // next, strictly smaller pivot.
      bool moved = false;
      const mpz_class piv = m.at(r, c);
      const std::vector<int> others(m.column_rows(c).begin(), m.column_rows(c).end());
      for (int r2 : others) {
        if (r2 == r) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), m.at(r2, c).get_mpz_t(), piv.get_mpz_t());
        m.row_axpy(r2, r, q);
      }
      mpz_class smallest = abs(piv);
      for (int r2 : m.column_rows(c)) {
        if (r2 != r && abs(m.at(r2, c)) < smallest) {
          smallest = abs(m.at(r2, c));
          r = r2;
          moved = true;
        }
      }
      if (moved) continue;

      // Column c now holds only the pivot; clear row r by column operations.
      const std::vector<std::pair<int, mpz_class>> row_entries(m.row(r).begin(), m.row(r).end());
      int next_col = -1;
      for (const auto& [c2, v] : row_entries) {
        if (c2 == c) continue;
        mpz_class rem;
        mpz_tdiv_r(rem.get_mpz_t(), v.get_mpz_t(), piv.get_mpz_t());
        m.reduce_entry(r, c2, rem);
        if (rem != 0 && abs(rem) < smallest) {
          smallest = abs(rem);
          next_col = c2;
        }
      }
      if (next_col >= 0) {
        c = next_col;
        continue;
      }
      diag.push_back(abs(piv));
      m.kill(r, c);
      break;
    }
  }

  result.diagonal = divisibility_chain(std::move(diag));
  result.rank = static_cast<int>(result.diagonal.size());
  return result;
}

int rank_mod2(const SparseIntMatrix& m) {
  // Column reduction keyed by the lowest set row (as in persistence algorithms).
  std::vector<std::vector<int>> cols;
  cols.reserve(m.cols());
  std::vector<int> owner(m.rows(), -1);
  int rank = 0;
  for (int c = 0; c < m.cols(); ++c) {
    std::vector<int> col;
    for (const auto& [r, v] : m.column(c)) {
      if (v % 2 != 0) col.push_back(r);
    }
    while (!col.empty() && owner[col.back()] >= 0) {
      const std::vector<int>& other = cols[owner[col.back()]];
      std::vector<int> sum;
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                    std::back_inserter(sum));
      col = std::move(sum);
    }
    if (!col.empty()) {
      owner[col.back()] = c;
      ++rank;
    }
    cols.push_back(std::move(col));
  }
  return rank;
}

std::vector<std::uint64_t> prime_power_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    std::uint64_t pk = 1;
    while (n % p == 0) {
      n /= p;
      pk *= p;
    }
    out.push_back(pk);
  }
  if (n > 1) out.push_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

HomologySummary homology_of(const BoundaryMatrices& bm, Coefficients coefficients) {
  HomologySummary h;
  const std::array<long, 3> count{static_cast<long>(bm.cells[0].size()),
                                  static_cast<long>(bm.cells[1].size()),
                                  static_cast<long>(bm.cells[2].size())};
  h.cell_euler = bm.euler_cell_count();

  const long r1_2 = rank_mod2(bm.d1);
  const long r2_2 = rank_mod2(bm.d2);
  h.betti_z2 = {count[0] - r1_2, count[1] - r1_2 - r2_2, count[2] - r2_2};

  if (coefficients == Coefficients::Z) {
    const SmithResult s1 = smith_normal_form(bm.d1);
    const SmithResult s2 = smith_normal_form(bm.d2);
    h.betti_q = std::array<long, 3>{count[0] - s1.rank, count[1] - s1.rank - s2.rank, count[2] - s2.rank};
    // H_0 torsion from d1, H_1 torsion from d2; H_2 = ker d2 is free.
    auto torsion_of = [](const SmithResult& s) {
      std::vector<std::uint64_t> t;
      for (const mpz_class& d : s.diagonal) {
        if (d > 1) {
          if (!d.fits_ulong_p()) throw std::overflow_error("torsion coefficient exceeds 64 bits");
          for (auto pk : prime_power_factors(d.get_ui())) t.push_back(pk);
        }
      }
      std::sort(t.begin(), t.end());
      return t;
    };
    h.torsion[0] = torsion_of(s1);
    h.torsion[1] = torsion_of(s2);
  }
  const auto& b = h.betti();
  h.euler = b[0] - b[1] + b[2];
  return h;
}

HomologySummary relative_homology(const CubicalSet& n, const CubicalSet& l, Coefficients coefficients) {
  return homology_of(relative_complex(n, l), coefficients);
}

std::vector<long> poincare_polynomial(const HomologySummary& h) {
  const auto& b = h.betti();
  return {b[0], b[1], b[2]};
}

namespace poly {

std::vector<long> trim(std::vector<long> p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

std::vector<long> add(std::vector<long> a, const std::vector<long>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return trim(std::move(a));
}

std::vector<long> sub(std::vector<long> a, const std::vector<long>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return trim(std::move(a));
}

long eval(const std::vector<long>& p, long t) {
  long acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::pair<std::vector<long>, long> divide_by_one_plus_t(const std::vector<long>& p_in) {
  const std::vector<long> p = trim(p_in);
  if (p.empty()) return {{}, 0};
  // Synthetic division by (t + 1) from the leading coefficient down.
  const std::size_t n = p.size();
  std::vector<long> q(n - 1, 0);
  long carry = 0;
  for (std::size_t k = n; k-- > 1;) {
    carry = p[k] - carry;
    q[k - 1] = carry;
  }
  const long remainder = p[0] - carry;
  return {trim(std::move(q)), remainder};
}

}  // namespace poly

}  // namespace conley
