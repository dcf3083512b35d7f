#include "conley_cli/run.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>

#include "conley/analysis.hpp"
#include "conley/errors.hpp"
#include "conley/orbits.hpp"

namespace conley::cli {

using nlohmann::json;

namespace {

constexpr std::pair<Command, const char*> kCommands[] = {
    {Command::Block, "block"},   {Command::Index, "index"},   {Command::Winding, "winding"},
    {Command::Morse, "morse"},   {Command::Verify, "verify"}, {Command::Orbits, "orbits"},
    {Command::Scan, "scan"},
};

json point_json(Point p) { return json::array({p.x, p.y}); }

json homology_json(const HomologySummary& h) {
  json torsion = json::array();
  for (const auto& t : h.torsion) torsion.push_back(t);
  return {{"betti_q", h.betti_q ? json(*h.betti_q) : json(nullptr)},
          {"betti_z2", h.betti_z2},
          {"torsion", torsion},
          {"euler", h.euler},
          {"cell_euler", h.cell_euler},
          {"poincare", poincare_polynomial(h)}};
}

json counts_json(const CubicalSet& s) {
  return {{"vertices", s.count(0)}, {"edges", s.count(1)}, {"squares", s.count(2)}};
}

json triple_json(const IndexTriple& t) {
  long exits = 0;
  long entrances = 0;
  for (const auto& f : t.faces) (f.verdict == Verdict::Exit ? exits : entrances) += 1;
  json tangencies = json::array();
  for (const auto& tg : t.tangencies) {
    tangencies.push_back({{"location", point_json(tg.location)}, {"kind", to_string(tg.kind)}, {"h", tg.h}});
  }
  return {{"depth", t.depth},
          {"n", counts_json(t.n)},
          {"lplus", counts_json(t.lplus)},
          {"lminus", counts_json(t.lminus)},
          {"faces", {{"exit", exits}, {"entrance", entrances}}},
          {"tangencies", tangencies},
          {"partition_holds", partition_holds(t)}};
}

json report_json(const ConleyReport& r) {
  return {{"triple", triple_json(r.triple)},
          {"forward", homology_json(r.forward)},
          {"backward", homology_json(r.backward)},
          {"classification", to_string(r.classification)},
          {"ind_p", r.ind_p}};
}

json value_json(const OutcomeValue& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

json outcome_json(const VerifierOutcome& o) {
  return {{"name", o.name}, {"holds", o.holds}, {"lhs", value_json(o.lhs)}, {"rhs", value_json(o.rhs)},
          {"notes", o.notes}};
}

json critical_points_json(const std::vector<CriticalPoint>& cps) {
  json out = json::array();
  for (const auto& cp : cps) {
    out.push_back({{"location", point_json(cp.location)}, {"winding_index", cp.winding_index},
                   {"residual", cp.residual}});
  }
  return out;
}

json limit_json(const LimitClassification& l, const std::vector<CriticalPoint>& cps) {
  json out{{"verdict", to_string(l.verdict)}};
  if (l.critical_point >= 0) out["critical_point"] = point_json(cps.at(l.critical_point).location);
  if (l.exit_location) out["exit_location"] = point_json(*l.exit_location);
  if (l.verdict == LimitVerdict::NearPeriodic) out["return_distance"] = l.return_distance;
  if (!l.reason.empty()) out["reason"] = l.reason;
  return out;
}

json error_json(const Error& e) {
  json out{{"kind", e.kind()}, {"message", e.what()}};
  if (const auto* t = dynamic_cast<const InternalTangency*>(&e)) {
    out["location"] = point_json({t->x(), t->y()});
    out["h"] = t->h();
    out["degenerate"] = t->degenerate();
  }
  if (const auto* b = dynamic_cast<const BlockFailsAtLambda*>(&e)) out["lambda"] = b->lambda();
  return out;
}

struct Context {
  const RunConfig& config;
  const std::optional<std::filesystem::path>& csv_dir;
  VectorFieldSpec spec;
  std::optional<double> lambda;

  PlanarField field() const { return PlanarField(spec, lambda); }

  NewtonOptions newton() const {
    NewtonOptions o;
    o.tol = config.tolerances.newton_tol;
    return o;
  }

  ConleyReport index() const {
    return conley_index(spec, config.domain, config.depth, config.shape.predicate(), config.block_options(), lambda);
  }

  IntegratorControls integrator() const {
    IntegratorControls c;
    c.rel_tol = config.tolerances.rel_tol;
    c.initial_step = config.integration.initial_step;
    c.max_step = config.integration.max_step;
    c.domain = config.integration.domain;
    return c;
  }

  LimitControls limits() const {
    LimitControls c;
    c.eps_conv = config.tolerances.eps_conv;
    c.eps_ret = config.tolerances.eps_ret;
    return c;
  }

  std::ofstream csv(const std::string& name) const {
    const auto path = *csv_dir / name;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
  }
};

int run_block(const Context& ctx, json& result) {
  const IndexTriple t = build_triple(ctx.spec, ctx.config.domain, ctx.config.depth, ctx.config.shape.predicate(),
                                     ctx.config.block_options(), ctx.lambda);
  result["triple"] = triple_json(t);
  if (ctx.csv_dir) {
    auto out = ctx.csv("cells.csv");
    write_cells_csv(out, t.n, "N", true);
    write_cells_csv(out, t.lplus, "L+", false);
    write_cells_csv(out, t.lminus, "L-", false);
  }
  return 0;
}

int run_index(const Context& ctx, json& result) {
  const ConleyReport r = ctx.index();
  result["report"] = report_json(r);
  result["critical_points"] = critical_points_json(
      find_critical_points(ctx.field(), ctx.config.domain, r.triple.depth, ctx.config.shape.predicate(), ctx.newton()));
  return 0;
}

int run_winding(const Context& ctx, json& result) {
  WindingOptions o;
  o.gap = ctx.config.tolerances.winding_gap;
  const auto& w = ctx.config.winding;
  result["center"] = point_json(w.center);
  result["radius"] = w.radius;
  result["winding_index"] = winding_index(ctx.field(), w.center, w.radius, w.samples, o);
  return 0;
}

MorseOptions morse_options(const Context& ctx) {
  MorseOptions o;
  o.block = ctx.config.block_options();
  o.newton = ctx.newton();
  return o;
}

json morse_json(const MorseReport& m) {
  json sets = json::array();
  for (const auto& s : m.sets) {
    json cps = json::array();
    for (Point p : s.critical_points) cps.push_back(point_json(p));
    sets.push_back({{"squares", s.cells.size()}, {"critical_points", cps}, {"report", report_json(s.report)}});
  }
  json order = json::array();
  for (auto [a, b] : m.order) order.push_back(json::array({a, b}));
  return {{"whole", report_json(m.whole)}, {"sets", sets}, {"order", order}, {"q_poly", m.q_poly},
          {"inequality_holds", m.inequality_holds}};
}

int run_morse(const Context& ctx, json& result) {
  const MorseReport m = morse_decomposition(ctx.spec, ctx.config.domain, ctx.config.depth,
                                            ctx.config.shape.predicate(), morse_options(ctx), ctx.lambda);
  result["morse"] = morse_json(m);
  return m.inequality_holds ? 0 : 1;
}

int run_verify(const Context& ctx, json& result) {
  const ConleyReport r = ctx.index();
  const auto cps =
      find_critical_points(ctx.field(), ctx.config.domain, r.triple.depth, ctx.config.shape.predicate(), ctx.newton());
  std::vector<VerifierOutcome> outcomes{verify_vanishing_extremes(r), verify_duality(r), verify_index_sum(r, cps)};
  if (ctx.config.verify.chi) outcomes.push_back(verify_attractor_euler(r, *ctx.config.verify.chi));
  outcomes.push_back(verify_positive_index(r));
  if (ctx.config.verify.morse) {
    const MorseReport m = morse_decomposition(ctx.spec, ctx.config.domain, ctx.config.depth,
                                              ctx.config.shape.predicate(), morse_options(ctx), ctx.lambda);
    outcomes.push_back(verify_morse_inequalities(m, m.whole));
  }
  if (ctx.spec.is_family() && !ctx.config.verify.lambda_samples.empty()) {
    outcomes.push_back(continuation_check(ctx.spec, ctx.config.domain, ctx.config.depth, ctx.config.shape.predicate(),
                                          ctx.config.verify.lambda_samples, ctx.config.block_options()));
  }
  json list = json::array();
  bool all = true;
  for (const auto& o : outcomes) {
    list.push_back(outcome_json(o));
    all = all && o.holds;
  }
  result["report"] = report_json(r);
  result["critical_points"] = critical_points_json(cps);
  result["verifiers"] = list;
  result["all_hold"] = all;
  return all ? 0 : 1;
}

int run_orbits(const Context& ctx, json& result) {
  const PlanarField f = ctx.field();
  const auto cps = find_critical_points(f, ctx.config.domain, ctx.config.depth, {}, ctx.newton());
  std::vector<Point> locations;
  for (const auto& cp : cps) locations.push_back(cp.location);
  const auto& o = ctx.config.orbits;
  std::vector<Direction> dirs;
  if (o.direction != "forward") dirs.push_back(Direction::Backward);
  if (o.direction != "backward") dirs.push_back(Direction::Forward);

  std::vector<OrbitSample> merged;
  json runs = json::object();
  for (Direction d : dirs) {
    const OrbitTrace trace = integrate(f, o.seed, d, o.t_max, ctx.integrator());
    const LimitClassification lc = classify_limit(trace, locations, ctx.limits());
    runs[to_string(d)] = {{"termination", to_string(trace.termination)},
                          {"samples", trace.samples.size()},
                          {"t_end", trace.samples.back().t},
                          {"end", point_json(trace.samples.back().p)},
                          {"limit", limit_json(lc, cps)}};
    if (d == Direction::Backward) {
      merged.assign(trace.samples.rbegin(), trace.samples.rend());
    } else {
      merged.insert(merged.end(), trace.samples.begin() + (merged.empty() ? 0 : 1), trace.samples.end());
    }
  }
  result["seed"] = point_json(o.seed);
  result["critical_points"] = critical_points_json(cps);
  result["runs"] = runs;
  if (ctx.csv_dir) {
    OrbitTrace combined;
    combined.samples = std::move(merged);
    auto out = ctx.csv("trace.csv");
    write_trace_csv(out, combined);
  }
  return 0;
}

int run_scan(const Context& ctx, json& result) {
  const PlanarField f = ctx.field();
  const auto& s = ctx.config.scan;
  WindingOptions wo;
  wo.gap = ctx.config.tolerances.winding_gap;
  const int index = winding_index(f, s.center, s.radius, 64, wo);
  ScanControls controls;
  controls.integrator = ctx.integrator();
  controls.limit = ctx.limits();
  controls.horizon_scale = s.horizon;
  const HomoclinicCensus census = homoclinic_scan(f, s.center, index, s.radius, s.seeds, controls);
  json entries = json::array();
  for (const auto& e : census.entries) {
    entries.push_back({{"seed", point_json(e.seed)},
                       {"forward", to_string(e.forward.verdict)},
                       {"backward", to_string(e.backward.verdict)},
                       {"homoclinic", e.homoclinic}});
  }
  result["census"] = {{"critical_point", point_json(census.critical_point)},
                      {"winding_index", census.winding_index},
                      {"radius", census.radius},
                      {"seeds", s.seeds},
                      {"fraction_homoclinic", census.fraction_homoclinic},
                      {"near_periodic", census.near_periodic},
                      {"entries", entries}};
  if (ctx.csv_dir) {
    auto out = ctx.csv("census.csv");
    write_census_csv(out, census);
  }
  return 0;
}

}  // namespace

Command parse_command(const std::string& name) {
  for (const auto& [c, n] : kCommands) {
    if (name == n) return c;
  }
  throw std::invalid_argument("unknown command '" + name + "'");
}

const char* to_string(Command c) {
  for (const auto& [k, n] : kCommands) {
    if (k == c) return n;
  }
  return "?";
}

RunOutcome run(const RunConfig& config, Command command, const std::optional<std::filesystem::path>& csv_dir) {
  const auto start = std::chrono::steady_clock::now();
  RunOutcome outcome;
  json result{{"command", to_string(command)}};
  try {
    VectorFieldSpec spec = config.spec();
    std::optional<double> lambda = config.field.lambda;
    if (spec.is_family() && !lambda && !config.verify.lambda_samples.empty()) {
      lambda = config.verify.lambda_samples.front();
    }
    const Context ctx{config, csv_dir, std::move(spec), lambda};
    switch (command) {
      case Command::Block: outcome.exit_code = run_block(ctx, result); break;
      case Command::Index: outcome.exit_code = run_index(ctx, result); break;
      case Command::Winding: outcome.exit_code = run_winding(ctx, result); break;
      case Command::Morse: outcome.exit_code = run_morse(ctx, result); break;
      case Command::Verify: outcome.exit_code = run_verify(ctx, result); break;
      case Command::Orbits: outcome.exit_code = run_orbits(ctx, result); break;
      case Command::Scan: outcome.exit_code = run_scan(ctx, result); break;
    }
  } catch (const Error& e) {
    result["error"] = error_json(e);
    outcome.exit_code = 2;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  outcome.report = make_report(config, json::array({result}), elapsed);
  return outcome;
}

json make_report(const RunConfig& config, json results, double elapsed_seconds) {
  return {{"version", kVersion},
          {"config", config.echo()},
          {"results", std::move(results)},
          {"timing", {{"elapsed_seconds", elapsed_seconds}}}};
}

}  // namespace conley::cli
