#include "conley/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "conley/errors.hpp"

namespace conley {

const char* to_string(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

const char* to_string(Termination t) {
  switch (t) {
    case Termination::TimeLimit: return "TimeLimit";
    case Termination::DomainExit: return "DomainExit";
    case Termination::Stalled: return "Stalled";
    case Termination::StepLimit: return "StepLimit";
  }
  return "?";
}

const char* to_string(LimitVerdict v) {
  switch (v) {
    case LimitVerdict::ConvergesToCriticalPoint: return "ConvergesToCriticalPoint";
    case LimitVerdict::NearPeriodic: return "NearPeriodic";
    case LimitVerdict::Escapes: return "Escapes";
    case LimitVerdict::Undetermined: return "Undetermined";
  }
  return "?";
}

namespace {

template <class F>
Point rk4_step(const F& f, Point y, double h) {
  const Point k1 = f(y);
  const Point k2 = f(y + (h / 2) * k1);
  const Point k3 = f(y + (h / 2) * k2);
  const Point k4 = f(y + h * k3);
  return y + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <class F>
Point doubled_step(const F& f, Point y, double h) {
  return rk4_step(f, rk4_step(f, y, h / 2), h / 2);
}

}  // namespace

OrbitTrace integrate(const PlanarField& field, Point seed, Direction direction, double t_max,
                     const IntegratorControls& c) {
  const double sign = direction == Direction::Forward ? 1.0 : -1.0;
  auto f = [&](Point p) { return sign * field(p); };

  OrbitTrace trace;
  trace.seed = seed;
  trace.direction = direction;
  trace.samples.push_back({0.0, seed, f(seed)});

  if (!c.domain.contains(seed)) {
    trace.termination = Termination::DomainExit;
    return trace;
  }

  Point y = seed;
  double s = 0.0;
  double h = std::min(c.initial_step, c.max_step);
  int accepted_run = 0;
  std::size_t steps = 0;

  while (s < t_max) {
    if (++steps > c.max_steps) {
      trace.termination = Termination::StepLimit;
      return trace;
    }
    const double step = std::min(h, t_max - s);
    const Point full = rk4_step(f, y, step);
    const Point half = doubled_step(f, y, step);
    const double err = norm(half - full);
    if (!(err <= c.rel_tol * (1.0 + norm(y)))) {
      h = step / 2;
      accepted_run = 0;
      if (h < c.min_step) {
        throw StepUnderflow("step size fell below " + std::to_string(c.min_step) + " at t = " +
                            std::to_string(sign * s));
      }
      continue;
    }

    if (!c.domain.contains(half)) {
      // Bisect on the step length for the boundary crossing.
      double lo = 0.0;
      double hi = step;
      while (hi - lo > 1e-12 * std::max(1.0, step)) {
        const double mid = 0.5 * (lo + hi);
        (c.domain.contains(doubled_step(f, y, mid)) ? lo : hi) = mid;
      }
      const Point exit = doubled_step(f, y, hi);
      trace.samples.push_back({sign * (s + hi), exit, f(exit)});
      trace.termination = Termination::DomainExit;
      trace.last_step = hi;
      return trace;
    }

    const Point last = y;
    y = half;
    s = (step == t_max - s) ? t_max : s + step;
    const Point v = f(y);
    trace.samples.push_back({sign * s, y, v});
    trace.last_step = step;

    if (norm(v) < c.stall_tol && norm(y - last) < c.stall_tol) {
      trace.termination = Termination::Stalled;
      return trace;
    }
    if (++accepted_run >= 5) {
      h = std::min(step * 1.5, c.max_step);
      accepted_run = 0;
    } else {
      h = std::max(h, step);
    }
  }
  trace.termination = Termination::TimeLimit;
  return trace;
}

namespace {

// Cubic Hermite interpolation between two samples in the parameter s = |t|.
Point hermite(const OrbitSample& a, const OrbitSample& b, double u) {
  const double ds = std::fabs(b.t - a.t);
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  return h00 * a.p + (h10 * ds) * a.velocity + h01 * b.p + (h11 * ds) * b.velocity;
}

}  // namespace

LimitClassification classify_limit(const OrbitTrace& trace, const std::vector<Point>& cps,
                                   const LimitControls& c) {
  LimitClassification out;
  const auto& smp = trace.samples;
  if (smp.empty()) {
    out.reason = "empty trace";
    return out;
  }
  const Point end = smp.back().p;

  if (trace.termination == Termination::DomainExit) {
    out.verdict = LimitVerdict::Escapes;
    out.exit_location = end;
    return out;
  }

  const std::size_t n = smp.size();
  const std::size_t window = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(c.dwell_fraction * n)));
  const std::size_t first = n > window ? n - window : 0;

  int best = -1;
  double best_dist = 0.0;
  for (std::size_t k = 0; k < cps.size(); ++k) {
    const double d = norm(end - cps[k]);
    if (best < 0 || d < best_dist) {
      best = static_cast<int>(k);
      best_dist = d;
    }
  }
  if (best >= 0) {
    const Point cp = cps[best];
    bool dwell = true;
    bool monotone = true;
    double prev = norm(smp[first].p - cp);
    for (std::size_t k = first; k < n; ++k) {
      const double d = norm(smp[k].p - cp);
      dwell = dwell && d <= c.eps_conv;
      if (k > first) monotone = monotone && d < prev;
      prev = d;
    }
    out.final_distance = best_dist;
    out.dwell_time = std::fabs(smp.back().t - smp[first].t);
    if (dwell || (monotone && best_dist < c.approach_radius)) {
      out.verdict = LimitVerdict::ConvergesToCriticalPoint;
      out.critical_point = best;
      return out;
    }
  }

  // Recurrence: most recent earlier crossing of the section through the end
  // point (normal to the flow there) in the same direction.
  const Point v_end = smp.back().velocity;
  if (norm(v_end) > 0.0 && n >= 3) {
    const Point u = (1.0 / norm(v_end)) * v_end;
    const double s_end = std::fabs(smp.back().t);
    for (std::size_t k = n - 2; k-- > 0;) {
      const double a = dot(smp[k].p - end, u);
      const double b = dot(smp[k + 1].p - end, u);
      if (!(a < 0.0 && b >= 0.0)) continue;
      if (s_end - std::fabs(smp[k].t) <= 10.0 * trace.last_step) continue;
      double lo = 0.0;
      double hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dot(hermite(smp[k], smp[k + 1], mid) - end, u) < 0.0 ? lo : hi) = mid;
      }
      const double ret = norm(hermite(smp[k], smp[k + 1], 0.5 * (lo + hi)) - end);
      out.return_distance = ret;
      if (ret > c.eps_ret) break;
      double min_cp = INFINITY;
      for (const Point& cp : cps) {
        for (std::size_t m = k; m < n; ++m) min_cp = std::min(min_cp, norm(smp[m].p - cp));
      }
      if (min_cp > c.eps_conv) {
        out.verdict = LimitVerdict::NearPeriodic;
        out.dwell_time = s_end - std::fabs(smp[k].t);
        return out;
      }
      break;
    }
  }
  out.reason = trace.termination == Termination::TimeLimit ? "no convergence or recurrence within t_max"
                                                            : std::string("terminated: ") + to_string(trace.termination);
  return out;
}

HomoclinicCensus homoclinic_scan(const PlanarField& field, Point cp, int winding_index, double radius,
                                 int n_seeds, const ScanControls& controls) {
  if (n_seeds < 8) throw std::invalid_argument("homoclinic_scan needs at least 8 seeds");
  if (!(radius > 0.0)) throw std::invalid_argument("homoclinic_scan needs a positive radius");
  HomoclinicCensus census;
  census.critical_point = cp;
  census.winding_index = winding_index;
  census.radius = radius;
  const double t_max = controls.horizon_scale / radius;
  const std::vector<Point> cps{cp};

  auto run = [&](Point seed, Direction dir) {
    try {
      return classify_limit(integrate(field, seed, dir, t_max, controls.integrator), cps, controls.limit);
    } catch (const Error& e) {
      LimitClassification lc;
      lc.reason = e.kind() + ": " + e.what();
      return lc;
    }
  };

  int homoclinic = 0;
  for (int k = 0; k < n_seeds; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_seeds;
    const Point seed{cp.x + radius * std::cos(theta), cp.y + radius * std::sin(theta)};
    CensusEntry e{seed, run(seed, Direction::Forward), run(seed, Direction::Backward), false};
    e.homoclinic = e.forward.verdict == LimitVerdict::ConvergesToCriticalPoint &&
                   e.backward.verdict == LimitVerdict::ConvergesToCriticalPoint &&
                   e.forward.critical_point == e.backward.critical_point;
    homoclinic += e.homoclinic ? 1 : 0;
    census.near_periodic += (e.forward.verdict == LimitVerdict::NearPeriodic) +
                            (e.backward.verdict == LimitVerdict::NearPeriodic);
    census.entries.push_back(std::move(e));
  }
  census.fraction_homoclinic = static_cast<double>(homoclinic) / n_seeds;
  return census;
}

void write_trace_csv(std::ostream& out, const OrbitTrace& trace) {
  out << "t,x,y\n";
  for (const auto& s : trace.samples) {
    out << format_double(s.t) << ',' << format_double(s.p.x) << ',' << format_double(s.p.y) << '\n';
  }
}

void write_census_csv(std::ostream& out, const HomoclinicCensus& census) {
  out << "seed_x,seed_y,forward,backward,homoclinic\n";
  for (const auto& e : census.entries) {
    out << format_double(e.seed.x) << ',' << format_double(e.seed.y) << ',' << to_string(e.forward.verdict)
        << ',' << to_string(e.backward.verdict) << ',' << (e.homoclinic ? "true" : "false") << '\n';
  }
}

}  // namespace conley
