#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "conley/complex.hpp"
#include "conley/field.hpp"

namespace conley {

enum class Direction { Forward, Backward };
enum class Termination { TimeLimit, DomainExit, Stalled, StepLimit };

const char* to_string(Direction d);
const char* to_string(Termination t);

struct IntegratorControls {
  double rel_tol = 1e-9;
  double initial_step = 1e-2;
  double min_step = 1e-12;
  double max_step = 0.5;
  double stall_tol = 1e-12;
  std::size_t max_steps = 2'000'000;
  Rect domain{-2.0, 2.0, -2.0, 2.0};
};

struct OrbitSample {
  double t;
  Point p;
  /// dp/ds for the integration parameter s = |t|.
  Point velocity;
};

struct OrbitTrace {
  Point seed;
  Direction direction = Direction::Forward;
  std::vector<OrbitSample> samples;
  Termination termination = Termination::TimeLimit;
  /// Last accepted step length.
  double last_step = 0.0;
};

/// Classical RK4 with step-doubling error control: a step h is accepted when
/// the full step and two half steps differ by at most rel_tol * (1 + |y|);
/// otherwise h is halved. h grows by 1.5 after five consecutive accepted
/// steps. Backward integration runs the reversed field and records t <= 0.
/// Throws StepUnderflow when h falls below min_step.
OrbitTrace integrate(const PlanarField& field, Point seed, Direction direction, double t_max,
                     const IntegratorControls& controls = {});

struct LimitControls {
  double eps_conv = 5e-3;
  double eps_ret = 1e-4;
  double dwell_fraction = 0.2;
  /// Final-distance bound for the monotone-approach clause.
  double approach_radius = 5e-2;
};

enum class LimitVerdict { ConvergesToCriticalPoint, NearPeriodic, Escapes, Undetermined };
const char* to_string(LimitVerdict v);

struct LimitClassification {
  LimitVerdict verdict = LimitVerdict::Undetermined;
  /// Index into the critical-point list for ConvergesToCriticalPoint.
  int critical_point = -1;
  double dwell_time = 0.0;
  double final_distance = 0.0;
  double return_distance = 0.0;
  std::optional<Point> exit_location;
  std::string reason;
};

LimitClassification classify_limit(const OrbitTrace& trace, const std::vector<Point>& critical_points,
                                   const LimitControls& controls = {});

struct ScanControls {
  IntegratorControls integrator;
  LimitControls limit;
  /// t_max = horizon_scale / radius.
  double horizon_scale = 50.0;
};

struct CensusEntry {
  Point seed;
  LimitClassification forward;
  LimitClassification backward;
  bool homoclinic = false;
};

struct HomoclinicCensus {
  Point critical_point;
  int winding_index = 0;
  double radius = 0.0;
  std::vector<CensusEntry> entries;
  double fraction_homoclinic = 0.0;
  int near_periodic = 0;
};

/// Integrates n_seeds equally spaced seeds on the circle of `radius` about
/// `cp` in both directions and counts orbits that tend to `cp` both ways.
/// Integrator failures are recorded as Undetermined.
HomoclinicCensus homoclinic_scan(const PlanarField& field, Point cp, int winding_index, double radius,
                                 int n_seeds, const ScanControls& controls = {});

void write_trace_csv(std::ostream& out, const OrbitTrace& trace);
void write_census_csv(std::ostream& out, const HomoclinicCensus& census);

}  // namespace conley
