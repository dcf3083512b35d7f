#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conley/block.hpp"
#include "conley/complex.hpp"
#include "conley/field.hpp"
#include "conley/homology.hpp"

namespace conley {

enum class Classification { Attractor, Repeller, Neither };
const char* to_string(Classification c);

/// Forward and backward homology Conley indices of one block.
struct ConleyReport {
  IndexTriple triple;
  HomologySummary forward;   // H(N, L+)
  HomologySummary backward;  // H(N, L-)
  Classification classification = Classification::Neither;
  long ind_p = 0;
};

ConleyReport conley_index(const VectorFieldSpec& spec, const Rect& rect, int depth,
                          const PointPredicate& shape, const BlockOptions& options = {},
                          std::optional<double> lambda = std::nullopt);

/// Report for an already constructed triple.
ConleyReport conley_index(IndexTriple triple);

struct WindingOptions {
  /// Largest allowed distance of the raw winding number from an integer.
  double gap = 1e-6;
  double min_norm = 1e-8;
  int max_samples = 1 << 20;
};

/// Degree of F / |F| along the circle of `radius` about `center`. Samples
/// double until every angle increment is below pi/3. Throws VanishingOnCurve
/// or NonConvergent.
int winding_index(const PlanarField& field, Point center, double radius, int initial_samples = 64,
                  const WindingOptions& options = {});

struct CriticalPoint {
  Point location;
  int winding_index = 0;
  bool newton_converged = false;
  double residual = 0.0;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iterations = 100;
  double dedup_radius = 1e-6;
};

/// Zeros of the field in the closed union of the shape's squares at `depth`,
/// found by Newton iteration from every square whose corner samples bracket
/// zero in both components. Only converged points are returned, sorted by
/// (x, y). Each point carries the winding index on a small circle.
std::vector<CriticalPoint> find_critical_points(const PlanarField& field, const Rect& rect, int depth,
                                                const PointPredicate& shape = {},
                                                const NewtonOptions& options = {});

using OutcomeValue = std::variant<long, double, std::vector<long>, std::string>;

struct VerifierOutcome {
  std::string name;
  bool holds = false;
  OutcomeValue lhs;
  OutcomeValue rhs;
  std::string notes;
};

/// ind_p == (-1)^m * sum of winding indices with m = 2.
VerifierOutcome verify_index_sum(const ConleyReport& report, const std::vector<CriticalPoint>& cps);
/// Not an attractor => b0(h+) = 0; not a repeller => b2(h+) = 0 over Z2 and Q.
VerifierOutcome verify_vanishing_extremes(const ConleyReport& report);
/// Z2 Betti numbers satisfy b_k(N, L+) = b_{2-k}(N, L-).
VerifierOutcome verify_duality(const ConleyReport& report);
/// Attractor or repeller: ind_p == chi(I). Throws NotApplicable otherwise.
VerifierOutcome verify_attractor_euler(const ConleyReport& report, long chi_of_invariant_set);
/// ind_p > 0 => attractor or repeller.
VerifierOutcome verify_positive_index(const ConleyReport& report);

/// Builds the block for every sampled lambda and requires one common N and
/// constant forward Betti numbers. Throws BlockFailsAtLambda.
VerifierOutcome continuation_check(const VectorFieldSpec& family, const Rect& rect, int depth,
                                   const PointPredicate& shape, const std::vector<double>& lambda_samples,
                                   const BlockOptions& options = {});

struct MorseSet {
  std::vector<Cell> cells;
  std::vector<Point> critical_points;
  ConleyReport report;
};

struct MorseReport {
  ConleyReport whole;
  std::vector<MorseSet> sets;
  /// (i, j): some orbit runs from set i down to set j.
  std::vector<std::pair<int, int>> order;
  std::vector<long> q_poly;
  bool inequality_holds = false;
};

struct MorseOptions {
  BlockOptions block;
  NewtonOptions newton;
  /// Layers of neighbouring squares added when a Morse set's own squares do
  /// not form an isolating block.
  int max_growth = 3;
};

/// Combinatorial Morse decomposition on the squares of the block. Throws the
/// block error of the first Morse set whose enclosing block cannot be built.
MorseReport morse_decomposition(const VectorFieldSpec& spec, const Rect& rect, int depth,
                                const PointPredicate& shape, const MorseOptions& options = {},
                                std::optional<double> lambda = std::nullopt);

/// sum_i p(t, h(M_i)) - p(t, h(I)) = (1 + t) Q(t) with Q >= 0. Throws
/// NotDivisible when (1 + t) does not divide the difference.
VerifierOutcome verify_morse_inequalities(const MorseReport& morse, const ConleyReport& whole);

std::string describe(const OutcomeValue& v);

}  // namespace conley
