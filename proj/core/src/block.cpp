#include "conley/block.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "conley/errors.hpp"

namespace conley {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Exit: return "Exit";
    case Verdict::Entrance: return "Entrance";
    case Verdict::Ambiguous: return "Ambiguous";
  }
  return "?";
}

const char* to_string(TangencyKind k) {
  switch (k) {
    case TangencyKind::Internal: return "Internal";
    case TangencyKind::External: return "External";
    case TangencyKind::Degenerate: return "Degenerate";
  }
  return "?";
}

namespace {

double normal_component(const PlanarField& f, Point p, Point n) { return dot(f(p), n); }

// n . (DF(p) F(p)): derivative of g = F . n along the flow.
double lie_derivative(const PlanarField& f, Point p, Point n) {
  const Point v = f(p);
  const Mat2 j = f.jacobian(p);
  const Point jv{j.a11 * v.x + j.a12 * v.y, j.a21 * v.x + j.a22 * v.y};
  return dot(n, jv);
}

int leading_sign(double g, double h, int time_sign, double tol) {
  if (std::fabs(g) > tol) return g > 0 ? time_sign : -time_sign;
  if (std::fabs(h) > tol) return h > 0 ? 1 : -1;
  return 0;
}

// Classifies a zero of g at p. Returns nullopt when the orbit crosses the
// boundary transversally at a corner.
std::optional<Tangency> classify_zero(const PlanarField& f, Point p, Point normal,
                                      const EndpointContext& ctx, double tol) {
  const double h = lie_derivative(f, p, normal);
  if (norm(f(p)) <= tol) return Tangency{p, TangencyKind::Degenerate, h};
  if (ctx.kind == EndpointContext::Kind::Straight) {
    if (h > tol) return Tangency{p, TangencyKind::External, h};
    if (h < -tol) return Tangency{p, TangencyKind::Internal, h};
    return Tangency{p, TangencyKind::Degenerate, h};
  }
  // Corner: decide membership of x(t) - p ~ t F + t^2/2 DF F on both sides
  // of t = 0 using leading-order signs against both normals.
  const double g1 = normal_component(f, p, normal);
  const double g2 = normal_component(f, p, ctx.other_normal);
  const double h2 = lie_derivative(f, p, ctx.other_normal);
  bool inside[2];
  for (int k = 0; k < 2; ++k) {
    const int ts = k == 0 ? 1 : -1;
    const int s1 = leading_sign(g1, h, ts, tol);
    const int s2 = leading_sign(g2, h2, ts, tol);
    if (s1 == 0 || s2 == 0) return Tangency{p, TangencyKind::Degenerate, h};
    inside[k] = ctx.kind == EndpointContext::Kind::Convex ? (s1 < 0 && s2 < 0) : (s1 < 0 || s2 < 0);
  }
  if (inside[0] && inside[1]) return Tangency{p, TangencyKind::Internal, h};
  if (!inside[0] && !inside[1]) return Tangency{p, TangencyKind::External, h};
  return std::nullopt;
}

Point lerp(Point a, Point b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }

}  // namespace

FaceClassification classify_face(const PlanarField& field, const FaceGeometry& face,
                                 const FaceOptions& options) {
  if (options.samples < 9) throw std::invalid_argument("classify_face needs at least 9 samples");
  const int n = options.samples;
  const double tol = options.tol;
  const double length = norm(face.b - face.a);

  std::vector<double> ts(n);
  std::vector<double> gs(n);
  for (int k = 0; k < n; ++k) {
    // Chebyshev points of the first kind, increasing in t.
    ts[k] = 0.5 * (1.0 - std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n)));
    gs[k] = normal_component(field, lerp(face.a, face.b, ts[k]), face.normal);
  }

  FaceClassification out{{}, face, Verdict::Ambiguous, {}};
  bool all_pos = true;
  bool all_neg = true;
  for (double g : gs) {
    all_pos = all_pos && g > tol;
    all_neg = all_neg && g < -tol;
  }

  const EndpointContext straight{};
  if (!all_pos && !all_neg) {
    std::vector<char> covered(n, 0);
    for (int k = 0; k + 1 < n; ++k) {
      if (!((gs[k] < 0 && gs[k + 1] > 0) || (gs[k] > 0 && gs[k + 1] < 0))) continue;
      double lo = ts[k];
      double hi = ts[k + 1];
      const double glo = gs[k];
      while ((hi - lo) * length > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        const double gm = normal_component(field, lerp(face.a, face.b, mid), face.normal);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        ((gm < 0) == (glo < 0) ? lo : hi) = mid;
      }
      const Point zero = lerp(face.a, face.b, 0.5 * (lo + hi));
      if (auto t = classify_zero(field, zero, face.normal, straight, tol)) out.tangencies.push_back(*t);
      covered[k] = covered[k + 1] = 1;
    }
    // Touching zeros without a sign change.
    for (int k = 0; k < n; ++k) {
      if (covered[k] || std::fabs(gs[k]) > tol) continue;
      const Point zero = lerp(face.a, face.b, ts[k]);
      if (auto t = classify_zero(field, zero, face.normal, straight, tol)) out.tangencies.push_back(*t);
      break;
    }
  } else {
    out.verdict = all_pos ? Verdict::Exit : Verdict::Entrance;
  }

  // Corners are checked even where g does not vanish: at a concave corner an
  // orbit can run from inside to inside touching only the vertex.
  for (const auto& [p, ctx] : {std::pair{face.a, face.at_a}, std::pair{face.b, face.at_b}}) {
    const bool vanishes = std::fabs(normal_component(field, p, face.normal)) <= tol;
    if (!vanishes && ctx.kind == EndpointContext::Kind::Straight) continue;
    auto t = classify_zero(field, p, face.normal, ctx, tol);
    if (t && (vanishes || t->kind != TangencyKind::External)) out.tangencies.push_back(*t);
  }
  return out;
}

PointPredicate BlockShape::predicate() const {
  const BlockShape s = *this;
  switch (kind) {
    case Kind::Rect: return [](Point) { return true; };
    case Kind::Disc: return [s](Point p) { return norm(p - s.center) < s.radius; };
    case Kind::Annulus:
      return [s](Point p) {
        const double r = norm(p - s.center);
        return r > s.r0 && r < s.r1;
      };
  }
  return [](Point) { return true; };
}

std::string BlockShape::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Rect: os << "rect"; break;
    case Kind::Disc: os << "disc(" << center.x << ", " << center.y << "; r=" << radius << ")"; break;
    case Kind::Annulus:
      os << "annulus(" << center.x << ", " << center.y << "; " << r0 << " < r < " << r1 << ")";
      break;
  }
  return os.str();
}

namespace {

struct SquareIndex {
  int i, j;
};

bool has_square(const CubicalSet& n, int i, int j) { return n.contains(Cell::square(i, j)); }

// Outward geometry at one endpoint of a boundary face. `inside` is the N
// square of the face, `outside` the other one; `step` moves from the face
// across the endpoint's perpendicular edge (e.g. -1 in i for the left end of
// a horizontal face).
EndpointContext endpoint_context(const CubicalSet& n, SquareIndex inside, SquareIndex outside,
                                 int di, int dj) {
  const SquareIndex t{inside.i + di, inside.j + dj};
  const SquareIndex u{outside.i + di, outside.j + dj};
  const Point away{static_cast<double>(di), static_cast<double>(dj)};
  if (!has_square(n, t.i, t.j)) return {EndpointContext::Kind::Convex, away};
  if (has_square(n, u.i, u.j)) return {EndpointContext::Kind::Concave, -1.0 * away};
  return {};
}

}  // namespace

std::vector<std::pair<Cell, FaceGeometry>> boundary_faces(const CubicalSet& n) {
  std::vector<std::pair<Cell, FaceGeometry>> out;
  const Rect& rect = n.rect();
  const int depth = n.depth();
  for (const Cell& e : n.cells(1)) {
    SquareIndex s0;
    SquareIndex s1;
    if (e.axis == Axis::Horizontal) {
      s0 = {e.i, e.j - 1};  // below
      s1 = {e.i, e.j};      // above
    } else {
      s0 = {e.i - 1, e.j};  // left
      s1 = {e.i, e.j};      // right
    }
    const bool in0 = has_square(n, s0.i, s0.j);
    const bool in1 = has_square(n, s1.i, s1.j);
    if (in0 == in1) continue;
    const SquareIndex inside = in0 ? s0 : s1;
    const SquareIndex outside = in0 ? s1 : s0;
    FaceGeometry g;
    const CellBox box = geometry(rect, depth, e);
    g.a = {box.x_min, box.y_min};
    g.b = {box.x_max, box.y_max};
    if (e.axis == Axis::Horizontal) {
      g.normal = {0.0, in0 ? 1.0 : -1.0};
      g.at_a = endpoint_context(n, inside, outside, -1, 0);
      g.at_b = endpoint_context(n, inside, outside, +1, 0);
    } else {
      g.normal = {in0 ? 1.0 : -1.0, 0.0};
      g.at_a = endpoint_context(n, inside, outside, 0, -1);
      g.at_b = endpoint_context(n, inside, outside, 0, +1);
    }
    out.emplace_back(e, g);
  }
  return out;
}

IndexTriple build_triple(const VectorFieldSpec& spec, const Rect& rect, int depth,
                         const PointPredicate& shape, const BlockOptions& options,
                         std::optional<double> lambda) {
  const PlanarField field(spec, lambda);
  const int cap = std::min(options.max_depth, kMaxDepth);
  if (depth > cap) throw std::invalid_argument("depth exceeds the refinement cap");
  for (int d = depth;; ++d) {
    CubicalSet n = build_set(rect, d, shape, kMaxDepth);
    std::vector<FaceClassification> faces;
    bool ambiguous = false;
    for (const auto& [cell, geom] : boundary_faces(n)) {
      FaceClassification fc = classify_face(field, geom, options.face);
      fc.face = cell;
      for (const Tangency& t : fc.tangencies) {
        if (t.kind != TangencyKind::External) {
          throw InternalTangency(t.location.x, t.location.y, t.h, t.kind == TangencyKind::Degenerate);
        }
      }
      ambiguous = ambiguous || fc.verdict == Verdict::Ambiguous;
      faces.push_back(std::move(fc));
    }
    if (ambiguous) {
      if (d >= cap) {
        throw DepthExhausted("ambiguous boundary faces persist at depth " + std::to_string(d));
      }
      continue;
    }

    CubicalSet lplus(rect, d);
    CubicalSet lminus(rect, d);
    std::vector<Tangency> tangencies;
    for (const auto& fc : faces) {
      (fc.verdict == Verdict::Exit ? lplus : lminus).insert(fc.face);
      for (const Tangency& t : fc.tangencies) {
        bool dup = false;
        for (const Tangency& s : tangencies) dup = dup || norm(s.location - t.location) < 1e-12;
        if (!dup) tangencies.push_back(t);
      }
    }
    return IndexTriple{std::move(n), std::move(lplus), std::move(lminus), std::move(faces),
                       std::move(tangencies), d, spec, lambda};
  }
}

bool partition_holds(const IndexTriple& t) {
  std::size_t boundary_count = 0;
  for (const auto& [cell, geom] : boundary_faces(t.n)) {
    ++boundary_count;
    if (t.lplus.contains(cell) == t.lminus.contains(cell)) return false;
  }
  return t.lplus.count(1) + t.lminus.count(1) == boundary_count &&
         t.lplus.intersected(t.lminus).count(1) == 0 && t.lplus.subset_of(t.n) &&
         t.lminus.subset_of(t.n);
}

}  // namespace conley
