#include "conley/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "conley/errors.hpp"

namespace conley {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Attractor: return "Attractor";
    case Classification::Repeller: return "Repeller";
    case Classification::Neither: return "Neither";
  }
  return "?";
}

ConleyReport conley_index(IndexTriple triple) {
  ConleyReport r{std::move(triple), {}, {}, Classification::Neither, 0};
  r.forward = relative_homology(r.triple.n, r.triple.lplus, Coefficients::Z);
  r.backward = relative_homology(r.triple.n, r.triple.lminus, Coefficients::Z);
  if (r.triple.lplus.count(1) == 0) {
    r.classification = Classification::Attractor;
  } else if (r.triple.lminus.count(1) == 0) {
    r.classification = Classification::Repeller;
  }
  r.ind_p = r.forward.euler;
  return r;
}

ConleyReport conley_index(const VectorFieldSpec& spec, const Rect& rect, int depth,
                          const PointPredicate& shape, const BlockOptions& options,
                          std::optional<double> lambda) {
  return conley_index(build_triple(spec, rect, depth, shape, options, lambda));
}

int winding_index(const PlanarField& field, Point center, double radius, int initial_samples,
                  const WindingOptions& options) {
  if (!(radius > 0.0)) throw std::invalid_argument("winding_index needs a positive radius");
  int n = std::max(initial_samples, 8);
  for (;;) {
    std::vector<Point> values(n);
    for (int k = 0; k < n; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / n;
      const Point p{center.x + radius * std::cos(theta), center.y + radius * std::sin(theta)};
      values[k] = field(p);
      if (norm(values[k]) <= options.min_norm) {
        throw VanishingOnCurve("field vanishes near (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                               ") on the winding circle");
      }
    }
    double total = 0.0;
    double largest = 0.0;
    for (int k = 0; k < n; ++k) {
      const Point a = values[k];
      const Point b = values[(k + 1) % n];
      const double step = std::atan2(cross(a, b), dot(a, b));
      largest = std::max(largest, std::fabs(step));
      total += step;
    }
    if (largest < std::numbers::pi / 3) {
      const double raw = total / (2.0 * std::numbers::pi);
      const double rounded = std::round(raw);
      if (std::fabs(raw - rounded) > options.gap) {
        throw NonConvergent("winding number " + std::to_string(raw) + " is not within the rounding gap");
      }
      return static_cast<int>(rounded);
    }
    if (n >= options.max_samples) {
      throw NonConvergent("angle increments stay above pi/3 at " + std::to_string(n) + " samples");
    }
    n *= 2;
  }
}

namespace {

bool in_closed_union(const CubicalSet& n, Point p) {
  const Rect& r = n.rect();
  const int res = n.resolution();
  const double dx = (r.x1 - r.x0) / res;
  const double dy = (r.y1 - r.y0) / res;
  const double slack = 1e-9 * std::max(dx, dy);
  const int i = static_cast<int>(std::floor((p.x - r.x0) / dx));
  const int j = static_cast<int>(std::floor((p.y - r.y0) / dy));
  for (int a = i - 1; a <= i + 1; ++a) {
    for (int b = j - 1; b <= j + 1; ++b) {
      const Cell sq = Cell::square(a, b);
      if (!n.contains(sq)) continue;
      const CellBox box = geometry(r, n.depth(), sq);
      if (p.x >= box.x_min - slack && p.x <= box.x_max + slack && p.y >= box.y_min - slack &&
          p.y <= box.y_max + slack) {
        return true;
      }
    }
  }
  return false;
}

struct NewtonResult {
  Point x;
  bool converged;
  double residual;
};

NewtonResult newton(const PlanarField& f, Point x, const NewtonOptions& o) {
  for (int it = 0; it < o.max_iterations; ++it) {
    const Point fx = f(x);
    if (fx.x == 0.0 && fx.y == 0.0) break;
    const Mat2 j = f.jacobian(x);
    const double det = j.det();
    if (det == 0.0 || !std::isfinite(det)) break;
    const Point step{(j.a22 * fx.x - j.a12 * fx.y) / det, (-j.a21 * fx.x + j.a11 * fx.y) / det};
    if (!std::isfinite(step.x) || !std::isfinite(step.y)) break;
    x = x - step;
    if (norm(step) <= 1e-15 * (1.0 + norm(x))) break;
  }
  const double res = norm(f(x));
  return {x, std::isfinite(res) && res <= o.tol, res};
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const PlanarField& field, const Rect& rect, int depth,
                                                const PointPredicate& shape, const NewtonOptions& options) {
  const CubicalSet n = build_set(rect, depth, shape ? shape : PointPredicate([](Point) { return true; }));
  std::vector<CriticalPoint> found;
  for (const Cell& sq : n.cells(2)) {
    const CellBox b = geometry(rect, depth, sq);
    double pmin = INFINITY, pmax = -INFINITY, qmin = INFINITY, qmax = -INFINITY;
    for (Point c : {Point{b.x_min, b.y_min}, Point{b.x_max, b.y_min}, Point{b.x_min, b.y_max},
                    Point{b.x_max, b.y_max}}) {
      const Point v = field(c);
      pmin = std::min(pmin, v.x);
      pmax = std::max(pmax, v.x);
      qmin = std::min(qmin, v.y);
      qmax = std::max(qmax, v.y);
    }
    if (!(pmin <= 0.0 && pmax >= 0.0 && qmin <= 0.0 && qmax >= 0.0)) continue;
    const NewtonResult r = newton(field, b.center(), options);
    if (!r.converged || !in_closed_union(n, r.x)) continue;
    const bool dup = std::any_of(found.begin(), found.end(), [&](const CriticalPoint& cp) {
      return norm(cp.location - r.x) <= options.dedup_radius;
    });
    if (!dup) found.push_back({r.x, 0, true, r.residual});
  }
  std::sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return a.location.x != b.location.x ? a.location.x < b.location.x : a.location.y < b.location.y;
  });

  const double cell = std::min(rect.x1 - rect.x0, rect.y1 - rect.y0) / (1 << depth);
  for (auto& cp : found) {
    double radius = cell / 2;
    for (const auto& other : found) {
      if (&other != &cp) radius = std::min(radius, 0.5 * norm(other.location - cp.location));
    }
    cp.winding_index = winding_index(field, cp.location, radius);
  }
  return found;
}

// ---------------------------------------------------------------------------
// Verifiers

namespace {

std::vector<long> as_vector(const std::array<long, 3>& a) { return {a[0], a[1], a[2]}; }

}  // namespace

std::string describe(const OutcomeValue& v) {
  std::ostringstream os;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::vector<long>>) {
          os << '[';
          for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
          os << ']';
        } else {
          os << x;
        }
      },
      v);
  return os.str();
}

VerifierOutcome verify_index_sum(const ConleyReport& report, const std::vector<CriticalPoint>& cps) {
  long sum = 0;
  for (const auto& cp : cps) sum += cp.winding_index;
  constexpr int m = 2;
  const long sign = m % 2 == 0 ? 1 : -1;
  VerifierOutcome o{"index_sum", report.ind_p == sign * sum, report.ind_p, sign * sum, {}};
  o.notes = "ind_p = (-1)^m * sum ind(x), m = 2, over " + std::to_string(cps.size()) + " critical point(s)";
  return o;
}

VerifierOutcome verify_vanishing_extremes(const ConleyReport& report) {
  const auto& fq = report.forward.betti();
  const auto& f2 = report.forward.betti_z2;
  std::vector<long> checked;
  std::string notes;
  if (report.classification != Classification::Attractor) {
    checked.push_back(fq[0]);
    checked.push_back(f2[0]);
    notes += "not an attractor: H0(h+) = 0 over Q and Z2; ";
  }
  if (report.classification != Classification::Repeller) {
    checked.push_back(fq[2]);
    checked.push_back(f2[2]);
    notes += "not a repeller: H2(h+) = 0 over Q and Z2";
  }
  const bool holds = std::all_of(checked.begin(), checked.end(), [](long b) { return b == 0; });
  return {"vanishing_extremes", holds, checked, std::vector<long>(checked.size(), 0), notes};
}

VerifierOutcome verify_duality(const ConleyReport& report) {
  const auto& f = report.forward.betti_z2;
  const auto& b = report.backward.betti_z2;
  const std::vector<long> lhs = as_vector(f);
  const std::vector<long> rhs{b[2], b[1], b[0]};
  return {"duality", lhs == rhs, lhs, rhs, "b_k(N, L+; Z2) = b_{2-k}(N, L-; Z2)"};
}

VerifierOutcome verify_attractor_euler(const ConleyReport& report, long chi) {
  if (report.classification == Classification::Neither) {
    throw NotApplicable("invariant set is neither an attractor nor a repeller");
  }
  constexpr int m = 2;
  const long rhs = report.classification == Classification::Attractor ? chi : (m % 2 == 0 ? chi : -chi);
  return {"attractor_euler", report.ind_p == rhs, report.ind_p, rhs,
          std::string(to_string(report.classification)) + ", chi(I) = " + std::to_string(chi)};
}

VerifierOutcome verify_positive_index(const ConleyReport& report) {
  const bool holds = report.ind_p <= 0 || report.classification != Classification::Neither;
  return {"positive_index", holds, report.ind_p, std::string(to_string(report.classification)),
          report.ind_p <= 0 ? "vacuous: ind_p <= 0" : "ind_p > 0 requires attractor or repeller"};
}

VerifierOutcome continuation_check(const VectorFieldSpec& family, const Rect& rect, int depth,
                                   const PointPredicate& shape, const std::vector<double>& lambda_samples,
                                   const BlockOptions& options) {
  if (lambda_samples.empty()) throw std::invalid_argument("continuation_check needs lambda samples");
  std::optional<CubicalSet> common;
  std::vector<long> first;
  std::vector<long> last;
  bool same_n = true;
  bool same_betti = true;
  std::ostringstream notes;
  for (double lambda : lambda_samples) {
    ConleyReport r = [&] {
      try {
        return conley_index(family, rect, depth, shape, options, lambda);
      } catch (const Error& e) {
        throw BlockFailsAtLambda(lambda, e.kind() + ": " + e.what());
      }
    }();
    const std::vector<long> betti = as_vector(r.forward.betti());
    if (!common) {
      common = r.triple.n;
      first = betti;
    } else {
      same_n = same_n && *common == r.triple.n;
      if (betti != first && same_betti) {
        same_betti = false;
        notes << "betti changes at lambda = " << lambda << "; ";
      }
    }
    last = betti;
  }
  if (!same_n) notes << "blocks differ between samples; ";
  notes << lambda_samples.size() << " lambda sample(s)";
  return {"continuation", same_n && same_betti, first, last, notes.str()};
}

namespace {

struct MorseQuotient {
  std::vector<long> sum;
  std::vector<long> whole;
  std::vector<long> q;
};

MorseQuotient morse_quotient(const MorseReport& morse, const ConleyReport& whole) {
  MorseQuotient m;
  for (const auto& s : morse.sets) m.sum = poly::add(m.sum, poincare_polynomial(s.report.forward));
  m.sum = poly::trim(m.sum);
  m.whole = poly::trim(poincare_polynomial(whole.forward));
  auto [q, remainder] = poly::divide_by_one_plus_t(poly::sub(m.sum, m.whole));
  if (remainder != 0) {
    throw NotDivisible("sum of Morse set polynomials minus p(t, h(I)) is not divisible by (1 + t)");
  }
  m.q = poly::trim(q);
  return m;
}

}  // namespace

VerifierOutcome verify_morse_inequalities(const MorseReport& morse, const ConleyReport& whole) {
  const MorseQuotient m = morse_quotient(morse, whole);
  const bool nonneg = std::all_of(m.q.begin(), m.q.end(), [](long c) { return c >= 0; });
  return {"morse_inequalities", nonneg, m.sum, m.whole,
          "sum p(t, h(M_i)) - p(t, h(I)) = (1 + t) Q(t), Q = " + describe(m.q)};
}

// ---------------------------------------------------------------------------
// Morse decomposition

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

// Iterative Tarjan; returns the component id of every vertex.
std::vector<int> strongly_connected(const std::vector<std::vector<int>>& adj, int& count) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int next = 0;
  count = 0;
  std::vector<std::pair<int, std::size_t>> call;
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < adj[v].size()) {
        const int w = adj[v][pos++];
        if (index[w] < 0) {
          index[w] = low[w] = next++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        for (;;) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = count;
          if (w == v) break;
        }
        ++count;
      }
      const int done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comp;
}

PointPredicate cell_membership(const Rect& rect, int depth, const std::set<Cell>& cells) {
  const int n = 1 << depth;
  const double dx = (rect.x1 - rect.x0) / n;
  const double dy = (rect.y1 - rect.y0) / n;
  return [=](Point p) {
    const int i = static_cast<int>(std::floor((p.x - rect.x0) / dx));
    const int j = static_cast<int>(std::floor((p.y - rect.y0) / dy));
    return cells.count(Cell::square(i, j)) != 0;
  };
}

}  // namespace

MorseReport morse_decomposition(const VectorFieldSpec& spec, const Rect& rect, int depth,
                                const PointPredicate& shape, const MorseOptions& options,
                                std::optional<double> lambda) {
  MorseReport out{conley_index(spec, rect, depth, shape, options.block, lambda), {}, {}, {}, false};
  const CubicalSet& n = out.whole.triple.n;
  const int d = out.whole.triple.depth;
  const PlanarField field(spec, lambda);
  const double tol = options.block.face.tol;

  const std::vector<Cell> squares = n.cells(2);
  std::map<Cell, int> id;
  for (std::size_t k = 0; k < squares.size(); ++k) id[squares[k]] = static_cast<int>(k);
  const int count = static_cast<int>(squares.size());

  // Flow graph across interior faces: the sign of the normal flux at the face
  // midpoint. When the midpoint flux vanishes the face is sampled; a face on
  // which the flux vanishes everywhere is invariant and carries no edge.
  std::vector<std::vector<int>> adj(count);
  const int samples = options.block.face.samples;
  for (const Cell& e : n.cells(1)) {
    const Cell a = e.axis == Axis::Horizontal ? Cell::square(e.i, e.j - 1) : Cell::square(e.i - 1, e.j);
    const Cell b = Cell::square(e.i, e.j);
    auto ia = id.find(a);
    auto ib = id.find(b);
    if (ia == id.end() || ib == id.end()) continue;
    const CellBox box = geometry(rect, d, e);
    const Point normal = e.axis == Axis::Horizontal ? Point{0, 1} : Point{1, 0};
    bool forward = false;
    bool backward = false;
    const double mid = dot(field(box.center()), normal);
    if (std::fabs(mid) > tol) {
      (mid > 0 ? forward : backward) = true;
    } else {
      for (int k = 0; k < samples; ++k) {
        const double t = 0.5 * (1.0 - std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * samples)));
        const Point p{box.x_min + t * (box.x_max - box.x_min), box.y_min + t * (box.y_max - box.y_min)};
        const double g = dot(field(p), normal);
        forward = forward || g > tol;
        backward = backward || g < -tol;
      }
    }
    if (forward) adj[ia->second].push_back(ib->second);
    if (backward) adj[ib->second].push_back(ia->second);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  int scc_count = 0;
  const std::vector<int> scc = strongly_connected(adj, scc_count);
  std::vector<int> scc_size(scc_count, 0);
  for (int v = 0; v < count; ++v) ++scc_size[scc[v]];

  UnionFind uf(count);
  std::vector<char> marked(count, 0);
  for (int v = 0; v < count; ++v) {
    if (scc_size[scc[v]] > 1) marked[v] = 1;
  }
  std::vector<int> scc_rep(scc_count, -1);
  for (int v = 0; v < count; ++v) {
    if (scc_rep[scc[v]] < 0) scc_rep[scc[v]] = v;
    uf.unite(v, scc_rep[scc[v]]);
  }

  const std::vector<CriticalPoint> cps = find_critical_points(field, rect, d, shape, options.newton);
  std::map<int, std::vector<Point>> cps_of_root;
  for (const auto& cp : cps) {
    int first_cell = -1;
    const double slack = 1e-9;
    for (int v = 0; v < count; ++v) {
      const CellBox b = geometry(rect, d, squares[v]);
      if (cp.location.x < b.x_min - slack || cp.location.x > b.x_max + slack ||
          cp.location.y < b.y_min - slack || cp.location.y > b.y_max + slack) {
        continue;
      }
      marked[v] = 1;
      if (first_cell < 0) first_cell = v;
      uf.unite(v, first_cell);
    }
  }

  // Contract every group and condense again so that Morse sets lying on a
  // common cycle merge.
  std::map<int, int> group_of_root;
  std::vector<int> group(count);
  for (int v = 0; v < count; ++v) {
    const int root = uf.find(v);
    auto [it, inserted] = group_of_root.emplace(root, static_cast<int>(group_of_root.size()));
    group[v] = it->second;
  }
  const int groups = static_cast<int>(group_of_root.size());
  std::vector<std::vector<int>> gadj(groups);
  std::vector<char> gmarked(groups, 0);
  for (int v = 0; v < count; ++v) {
    gmarked[group[v]] = gmarked[group[v]] || marked[v];
    for (int w : adj[v]) {
      if (group[w] != group[v]) gadj[group[v]].push_back(group[w]);
    }
  }
  for (auto& list : gadj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  int cond_count = 0;
  const std::vector<int> cond = strongly_connected(gadj, cond_count);
  std::vector<char> cond_marked(cond_count, 0);
  for (int g = 0; g < groups; ++g) cond_marked[cond[g]] = cond_marked[cond[g]] || gmarked[g];

  // Morse sets are the marked condensed nodes, ordered by their first cell.
  std::map<int, std::vector<Cell>> cells_of;
  for (int v = 0; v < count; ++v) {
    const int c = cond[group[v]];
    if (cond_marked[c]) cells_of[c].push_back(squares[v]);
  }
  std::vector<std::pair<Cell, int>> ordering;
  for (const auto& [c, cells] : cells_of) ordering.emplace_back(cells.front(), c);
  std::sort(ordering.begin(), ordering.end());
  std::map<int, int> set_index;
  for (const auto& [cell, c] : ordering) set_index.emplace(c, static_cast<int>(set_index.size()));

  // Reachability between Morse sets in the condensed DAG.
  std::vector<std::vector<int>> cadj(cond_count);
  for (int g = 0; g < groups; ++g) {
    for (int h : gadj[g]) {
      if (cond[g] != cond[h]) cadj[cond[g]].push_back(cond[h]);
    }
  }
  for (const auto& [cell, c] : ordering) {
    std::vector<char> seen(cond_count, 0);
    std::vector<int> todo{c};
    seen[c] = 1;
    while (!todo.empty()) {
      const int u = todo.back();
      todo.pop_back();
      for (int w : cadj[u]) {
        if (seen[w]) continue;
        seen[w] = 1;
        todo.push_back(w);
        if (auto it = set_index.find(w); it != set_index.end()) {
          out.order.emplace_back(set_index.at(c), it->second);
        }
      }
    }
  }
  std::sort(out.order.begin(), out.order.end());

  // Enclosing blocks, growing by neighbouring squares when needed.
  std::set<Cell> all_morse_cells;
  for (const auto& [c, cells] : cells_of) all_morse_cells.insert(cells.begin(), cells.end());
  for (const auto& [first, c] : ordering) {
    const std::vector<Cell>& cells = cells_of.at(c);
    std::set<Cell> region(cells.begin(), cells.end());
    std::vector<Point> inside;
    for (const auto& cp : cps) {
      for (const Cell& sq : cells) {
        const CellBox b = geometry(rect, d, sq);
        if (cp.location.x >= b.x_min - 1e-9 && cp.location.x <= b.x_max + 1e-9 &&
            cp.location.y >= b.y_min - 1e-9 && cp.location.y <= b.y_max + 1e-9) {
          inside.push_back(cp.location);
          break;
        }
      }
    }
    std::optional<ConleyReport> report;
    for (int layer = 0;; ++layer) {
      std::exception_ptr failure;
      try {
        report = conley_index(spec, rect, d, cell_membership(rect, d, region), options.block, lambda);
        break;
      } catch (const Error&) {
        if (layer >= options.max_growth) throw;
        failure = std::current_exception();
      }
      std::set<Cell> grown = region;
      for (const Cell& sq : region) {
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            const Cell nb = Cell::square(sq.i + di, sq.j + dj);
            if (n.contains(nb)) grown.insert(nb);
          }
        }
      }
      for (const Cell& sq : grown) {
        // Growing further would swallow another Morse set.
        if (!region.count(sq) && all_morse_cells.count(sq)) std::rethrow_exception(failure);
      }
      region = std::move(grown);
    }
    out.sets.push_back({cells, inside, std::move(*report)});
  }

  try {
    out.q_poly = morse_quotient(out, out.whole).q;
    out.inequality_holds = std::all_of(out.q_poly.begin(), out.q_poly.end(), [](long c) { return c >= 0; });
  } catch (const NotDivisible&) {
    out.inequality_holds = false;
  }
  return out;
}

}  // namespace conley
