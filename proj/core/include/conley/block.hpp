#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conley/complex.hpp"
#include "conley/field.hpp"

namespace conley {

enum class Verdict { Exit, Entrance, Ambiguous };
enum class TangencyKind { Internal, External, Degenerate };

const char* to_string(Verdict v);
const char* to_string(TangencyKind k);

/// A boundary point where the field is tangent to N. `h` is the second-order
/// value n . (DF F) used to decide on which side the orbit stays.
struct Tangency {
  Point location;
  TangencyKind kind;
  double h;
};

/// How the boundary of N continues past a face endpoint. For corners,
/// `other_normal` is the outward normal of the perpendicular boundary face.
struct EndpointContext {
  enum class Kind { Straight, Convex, Concave };
  Kind kind = Kind::Straight;
  Point other_normal{};
};

/// Axis-aligned boundary segment from `a` to `b` with outward unit normal.
struct FaceGeometry {
  Point a;
  Point b;
  Point normal;
  EndpointContext at_a;
  EndpointContext at_b;
};

struct FaceOptions {
  int samples = 33;
  double tol = 1e-9;
};

struct FaceClassification {
  Cell face;
  FaceGeometry geometry;
  Verdict verdict;
  std::vector<Tangency> tangencies;
};

/// Classifies one face by the sign of g = F . n at Chebyshev points of the
/// open face, locating zeros by bisection and classifying each zero (and any
/// zero at an endpoint) by the second-order test. Requires samples >= 9.
FaceClassification classify_face(const PlanarField& field, const FaceGeometry& face,
                                 const FaceOptions& options = {});

/// Shape of an isolating block candidate, evaluated at square centers.
struct BlockShape {
  enum class Kind { Rect, Disc, Annulus };
  Kind kind = Kind::Rect;
  Point center{};
  double radius = 1.0;
  double r0 = 0.0;
  double r1 = 1.0;

  static BlockShape whole() { return {}; }
  static BlockShape disc(Point c, double r) { return {Kind::Disc, c, r, 0.0, r}; }
  static BlockShape annulus(Point c, double inner, double outer) {
    return {Kind::Annulus, c, outer, inner, outer};
  }

  PointPredicate predicate() const;
  std::string describe() const;
};

struct BlockOptions {
  FaceOptions face;
  /// Refinement cap for ambiguous faces.
  int max_depth = 8;
};

/// (N, L-, L+): L+ is the closure of the exit faces, L- the closure of the
/// entrance faces. Every boundary face of N is in exactly one of them.
struct IndexTriple {
  CubicalSet n;
  CubicalSet lplus;
  CubicalSet lminus;
  std::vector<FaceClassification> faces;
  /// External tangencies, deduplicated by location.
  std::vector<Tangency> tangencies;
  int depth = 0;
  VectorFieldSpec spec;
  std::optional<double> lambda;
};

/// Boundary 1-cells of N with their outward geometry and endpoint contexts,
/// in canonical order.
std::vector<std::pair<Cell, FaceGeometry>> boundary_faces(const CubicalSet& n);

/// Builds N from `shape` and classifies its boundary. Ambiguous faces trigger
/// a rebuild at depth + 1 up to `options.max_depth`. Throws InternalTangency
/// (internal or degenerate tangency found), DepthExhausted or EmptySet.
IndexTriple build_triple(const VectorFieldSpec& spec, const Rect& rect, int depth,
                         const PointPredicate& shape, const BlockOptions& options = {},
                         std::optional<double> lambda = std::nullopt);

/// Checks the partition invariant: boundary faces split exactly into the
/// 1-cells of L+ and L-, and L+ and L- share only vertices.
bool partition_holds(const IndexTriple& t);

}  // namespace conley
