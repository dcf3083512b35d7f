#include <gtest/gtest.h>

#include "conley/block.hpp"
#include "conley/errors.hpp"
#include "flow.hpp"

using namespace conley;

namespace {

const Rect kSquare{-1, 1, -1, 1};
PointPredicate whole() { return BlockShape::whole().predicate(); }

FaceGeometry face(Point a, Point b, Point normal) { return {a, b, normal, {}, {}}; }

// d/dt g(x(t)) at t = 0 by central differences along an integrated orbit.
double flow_derivative_of_g(const PlanarField& f, Point p, Point n) {
  const double dt = 1e-4;
  const double ahead = dot(f(oracle::rk4(f, p, dt, 20)), n);
  const double behind = dot(f(oracle::rk4(f, p, -dt, 20)), n);
  return (ahead - behind) / (2 * dt);
}

}  // namespace

TEST(ClassifyFace, SaddleRightFaceExits) {
  const PlanarField f(catalogue("saddle"));
  const FaceClassification c = classify_face(f, face({1, 0}, {1, 1}, {1, 0}));
  EXPECT_EQ(c.verdict, Verdict::Exit);
  EXPECT_TRUE(c.tangencies.empty());
}

TEST(ClassifyFace, Zpow2TopFaceHasInternalTangency) {
  const PlanarField f(catalogue("zpow2"));
  const FaceClassification c = classify_face(f, face({-1, 1}, {1, 1}, {0, 1}));
  EXPECT_EQ(c.verdict, Verdict::Ambiguous);
  ASSERT_EQ(c.tangencies.size(), 1u);
  const Tangency& t = c.tangencies[0];
  EXPECT_EQ(t.kind, TangencyKind::Internal);
  EXPECT_NEAR(t.location.x, 0.0, 1e-9);
  EXPECT_EQ(t.location.y, 1.0);
  EXPECT_NEAR(t.h, -2.0, 1e-9);
  EXPECT_NEAR(flow_derivative_of_g(f, t.location, {0, 1}), t.h, 1e-6);
}

TEST(ClassifyFace, Zbarpow2TopFaceHasExternalTangency) {
  const PlanarField f(catalogue("zbarpow2"));
  const FaceClassification c = classify_face(f, face({-1, 1}, {1, 1}, {0, 1}));
  EXPECT_EQ(c.verdict, Verdict::Ambiguous);
  ASSERT_EQ(c.tangencies.size(), 1u);
  EXPECT_EQ(c.tangencies[0].kind, TangencyKind::External);
  EXPECT_NEAR(c.tangencies[0].h, 2.0, 1e-9);
  EXPECT_NEAR(flow_derivative_of_g(f, c.tangencies[0].location, {0, 1}), 2.0, 1e-6);
}

TEST(ClassifyFace, Zbarpow2HalvesAfterSplit) {
  const PlanarField f(catalogue("zbarpow2"));
  const FaceClassification left = classify_face(f, face({-1, 1}, {0, 1}, {0, 1}));
  const FaceClassification right = classify_face(f, face({0, 1}, {1, 1}, {0, 1}));
  EXPECT_EQ(left.verdict, Verdict::Exit);
  EXPECT_EQ(right.verdict, Verdict::Entrance);
  ASSERT_EQ(left.tangencies.size(), 1u);
  EXPECT_EQ(left.tangencies[0].kind, TangencyKind::External);
  EXPECT_EQ(left.tangencies[0].location, (Point{0, 1}));
}

TEST(ClassifyFace, VanishingFieldIsDegenerate) {
  const PlanarField f(catalogue("doublewell"));
  // g = x - x^3 vanishes identically on x = 1.
  const FaceClassification c = classify_face(f, face({1, -1}, {1, 1}, {1, 0}));
  EXPECT_EQ(c.verdict, Verdict::Ambiguous);
  ASSERT_FALSE(c.tangencies.empty());
  EXPECT_EQ(c.tangencies[0].kind, TangencyKind::Degenerate);
}

TEST(ClassifyFace, RejectsTooFewSamples) {
  FaceOptions o;
  o.samples = 5;
  EXPECT_THROW(classify_face(PlanarField(catalogue("node")), face({0, 0}, {1, 0}, {0, -1}), o),
               std::invalid_argument);
}

TEST(BuildTriple, NodeHasEmptyExitSet) {
  const IndexTriple t = build_triple(catalogue("node"), kSquare, 1, whole());
  EXPECT_EQ(t.lplus.count(1), 0u);
  EXPECT_EQ(t.lminus.count(1), 8u);
  for (const auto& fc : t.faces) EXPECT_EQ(fc.verdict, Verdict::Entrance);
  EXPECT_TRUE(partition_holds(t));
}

TEST(BuildTriple, SaddleSplitsBoundary) {
  const IndexTriple t = build_triple(catalogue("saddle"), kSquare, 2, whole());
  EXPECT_EQ(t.lplus.count(1), 8u);
  EXPECT_EQ(t.lminus.count(1), 8u);
  EXPECT_TRUE(partition_holds(t));
  // Exit faces are the vertical ones.
  for (const Cell& e : t.lplus.cells(1)) EXPECT_EQ(e.axis, Axis::Vertical);
}

TEST(BuildTriple, Zbarpow2RefinesPastAmbiguity) {
  const IndexTriple t = build_triple(catalogue("zbarpow2"), kSquare, 0, whole());
  EXPECT_EQ(t.depth, 1);
  EXPECT_TRUE(partition_holds(t));
  for (const Tangency& tg : t.tangencies) EXPECT_EQ(tg.kind, TangencyKind::External);
}

TEST(BuildTriple, Zpow2ThrowsInternalTangency) {
  try {
    build_triple(catalogue("zpow2"), kSquare, 2, whole());
    FAIL() << "expected InternalTangency";
  } catch (const InternalTangency& e) {
    EXPECT_NEAR(e.x(), 0.0, 1e-6);
    EXPECT_NEAR(std::abs(e.y()), 1.0, 1e-6);
    EXPECT_FALSE(e.degenerate());
    EXPECT_LT(e.h(), 0.0);
  }
}

TEST(BuildTriple, PersistentAmbiguityExhaustsDepth) {
  // External tangency at x = 1/3 on the top and bottom faces never lands on a
  // dyadic vertex.
  const VectorFieldSpec s = parse_vector_field("(x - 1/3)^2 - y^2", "-2*(x - 1/3)*y", "shifted");
  BlockOptions o;
  o.max_depth = 4;
  EXPECT_THROW(build_triple(s, kSquare, 1, whole(), o), DepthExhausted);
}

TEST(BuildTriple, DepthAboveCapIsRejected) {
  BlockOptions o;
  o.max_depth = 3;
  EXPECT_THROW(build_triple(catalogue("node"), kSquare, 4, whole(), o), std::invalid_argument);
}

TEST(BuildTriple, ConcaveCornerPassThroughIsInternal) {
  // Staircase disc for the rotating field: at a concave corner the orbit runs
  // from one square of N to another touching the boundary only at the vertex.
  const Rect r{-1.5, 1.5, -1.5, 1.5};
  try {
    build_triple(catalogue("hopf"), r, 4, BlockShape::disc({0, 0}, 1.4).predicate());
    FAIL() << "expected InternalTangency";
  } catch (const InternalTangency& e) {
    const Point v{e.x(), e.y()};
    const CubicalSet n = build_set(r, 4, BlockShape::disc({0, 0}, 1.4).predicate());
    const PlanarField f(catalogue("hopf"));
    EXPECT_TRUE(oracle::in_union(n, oracle::rk4(f, v, 1e-3, 10)));
    EXPECT_TRUE(oracle::in_union(n, oracle::rk4(f, v, -1e-3, 10)));
  }
}

TEST(Shapes, StrictPredicates) {
  const auto disc = BlockShape::disc({0, 0}, 1).predicate();
  EXPECT_TRUE(disc({0.5, 0}));
  EXPECT_FALSE(disc({1, 0}));
  const auto ann = BlockShape::annulus({0, 0}, 0.5, 1).predicate();
  EXPECT_FALSE(ann({0.5, 0}));
  EXPECT_TRUE(ann({0.7, 0}));
  EXPECT_FALSE(ann({0, 0}));
}

// Property: on every built block, exit faces are left in forward time and
// entrance faces in backward time (checked by integration from face midpoints).
TEST(Property, FaceVerdictsMatchIntegratedOrbits) {
  struct Case {
    const char* name;
    Rect rect;
    int depth;
  };
  const Case cases[] = {{"saddle", kSquare, 3}, {"node", kSquare, 3}, {"source", kSquare, 3},
                        {"zbarpow2", kSquare, 3}, {"doublewell", {-2, 2, -1, 1}, 4}, {"hopf", {-1.5, 1.5, -1.5, 1.5}, 3}};
  for (const auto& c : cases) {
    const IndexTriple t = build_triple(catalogue(c.name), c.rect, c.depth, whole());
    const PlanarField f(catalogue(c.name));
    for (const auto& fc : t.faces) {
      const Point mid = 0.5 * (fc.geometry.a + fc.geometry.b);
      const double dt = 1e-4;
      const Point ahead = oracle::rk4(f, mid, dt, 4);
      const Point behind = oracle::rk4(f, mid, -dt, 4);
      if (fc.verdict == Verdict::Exit) {
        EXPECT_FALSE(oracle::in_union(t.n, ahead)) << c.name;
        EXPECT_TRUE(oracle::in_union(t.n, behind)) << c.name;
      } else {
        EXPECT_TRUE(oracle::in_union(t.n, ahead)) << c.name;
        EXPECT_FALSE(oracle::in_union(t.n, behind)) << c.name;
      }
    }
  }
}
