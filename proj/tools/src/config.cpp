#include "conley_cli/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "conley/errors.hpp"

namespace conley::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& v, int line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw ParseError(line, "not a number: '" + v + "'");
  return out;
}

long to_long(const std::string& v, int line) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw ParseError(line, "not an integer: '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ParseError(line, "expected true or false, got '" + v + "'");
}

double positive(const std::string& v, int line) {
  const double d = to_double(v, line);
  if (!(d > 0.0)) throw ParseError(line, "value must be positive, got " + v);
  return d;
}

int bounded(const std::string& v, int line, long lo, long hi, const char* what) {
  const long n = to_long(v, line);
  if (n < lo || n > hi) {
    throw ParseError(line, std::string(what) + " must be in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                               "], got " + v);
  }
  return static_cast<int>(n);
}

std::vector<double> to_list(const std::string& v, int line) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ParseError(line, "empty entry in list '" + v + "'");
    out.push_back(to_double(item, line));
  }
  if (out.empty()) throw ParseError(line, "empty list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;
using Table = std::map<std::string, std::map<std::string, Setter>>;

const Table& table() {
  static const Table t = {
      {"field",
       {{"name", [](RunConfig& c, const std::string& v, int) { c.field.name = v; }},
        {"p", [](RunConfig& c, const std::string& v, int) { c.field.p = v; }},
        {"q", [](RunConfig& c, const std::string& v, int) { c.field.q = v; }},
        {"lambda", [](RunConfig& c, const std::string& v, int l) { c.field.lambda = to_double(v, l); }}}},
      {"domain",
       {{"x0", [](RunConfig& c, const std::string& v, int l) { c.domain.x0 = to_double(v, l); }},
        {"x1", [](RunConfig& c, const std::string& v, int l) { c.domain.x1 = to_double(v, l); }},
        {"y0", [](RunConfig& c, const std::string& v, int l) { c.domain.y0 = to_double(v, l); }},
        {"y1", [](RunConfig& c, const std::string& v, int l) { c.domain.y1 = to_double(v, l); }}}},
      {"block",
       {{"depth", [](RunConfig& c, const std::string& v, int l) { c.depth = bounded(v, l, 0, kMaxDepth, "depth"); }},
        {"max_depth",
         [](RunConfig& c, const std::string& v, int l) { c.max_depth = bounded(v, l, 0, kMaxDepth, "max_depth"); }},
        {"shape",
         [](RunConfig& c, const std::string& v, int l) {
           if (v == "rect") {
             c.shape.kind = BlockShape::Kind::Rect;
           } else if (v == "disc") {
             c.shape.kind = BlockShape::Kind::Disc;
           } else if (v == "annulus") {
             c.shape.kind = BlockShape::Kind::Annulus;
           } else {
             throw ParseError(l, "shape must be rect, disc or annulus, got '" + v + "'");
           }
         }},
        {"cx", [](RunConfig& c, const std::string& v, int l) { c.shape.center.x = to_double(v, l); }},
        {"cy", [](RunConfig& c, const std::string& v, int l) { c.shape.center.y = to_double(v, l); }},
        {"radius", [](RunConfig& c, const std::string& v, int l) { c.shape.radius = positive(v, l); }},
        {"r0", [](RunConfig& c, const std::string& v, int l) { c.shape.r0 = to_double(v, l); }},
        {"r1", [](RunConfig& c, const std::string& v, int l) { c.shape.r1 = positive(v, l); }},
        {"samples",
         [](RunConfig& c, const std::string& v, int l) { c.face_samples = bounded(v, l, 9, 1 << 16, "samples"); }}}},
      {"tolerances",
       {{"face_tol", [](RunConfig& c, const std::string& v, int l) { c.tolerances.face_tol = positive(v, l); }},
        {"winding_gap", [](RunConfig& c, const std::string& v, int l) { c.tolerances.winding_gap = positive(v, l); }},
        {"newton_tol", [](RunConfig& c, const std::string& v, int l) { c.tolerances.newton_tol = positive(v, l); }},
        {"rel_tol", [](RunConfig& c, const std::string& v, int l) { c.tolerances.rel_tol = positive(v, l); }},
        {"eps_conv", [](RunConfig& c, const std::string& v, int l) { c.tolerances.eps_conv = positive(v, l); }},
        {"eps_ret", [](RunConfig& c, const std::string& v, int l) { c.tolerances.eps_ret = positive(v, l); }}}},
      {"winding",
       {{"cx", [](RunConfig& c, const std::string& v, int l) { c.winding.center.x = to_double(v, l); }},
        {"cy", [](RunConfig& c, const std::string& v, int l) { c.winding.center.y = to_double(v, l); }},
        {"radius", [](RunConfig& c, const std::string& v, int l) { c.winding.radius = positive(v, l); }},
        {"samples",
         [](RunConfig& c, const std::string& v, int l) { c.winding.samples = bounded(v, l, 8, 1 << 20, "samples"); }}}},
      {"orbits",
       {{"seed_x", [](RunConfig& c, const std::string& v, int l) { c.orbits.seed.x = to_double(v, l); }},
        {"seed_y", [](RunConfig& c, const std::string& v, int l) { c.orbits.seed.y = to_double(v, l); }},
        {"direction",
         [](RunConfig& c, const std::string& v, int l) {
           if (v != "forward" && v != "backward" && v != "both") {
             throw ParseError(l, "direction must be forward, backward or both, got '" + v + "'");
           }
           c.orbits.direction = v;
         }},
        {"t_max", [](RunConfig& c, const std::string& v, int l) { c.orbits.t_max = positive(v, l); }}}},
      {"integration",
       {{"x0", [](RunConfig& c, const std::string& v, int l) { c.integration.domain.x0 = to_double(v, l); }},
        {"x1", [](RunConfig& c, const std::string& v, int l) { c.integration.domain.x1 = to_double(v, l); }},
        {"y0", [](RunConfig& c, const std::string& v, int l) { c.integration.domain.y0 = to_double(v, l); }},
        {"y1", [](RunConfig& c, const std::string& v, int l) { c.integration.domain.y1 = to_double(v, l); }},
        {"initial_step",
         [](RunConfig& c, const std::string& v, int l) { c.integration.initial_step = positive(v, l); }},
        {"max_step", [](RunConfig& c, const std::string& v, int l) { c.integration.max_step = positive(v, l); }}}},
      {"scan",
       {{"cx", [](RunConfig& c, const std::string& v, int l) { c.scan.center.x = to_double(v, l); }},
        {"cy", [](RunConfig& c, const std::string& v, int l) { c.scan.center.y = to_double(v, l); }},
        {"radius", [](RunConfig& c, const std::string& v, int l) { c.scan.radius = positive(v, l); }},
        {"seeds", [](RunConfig& c, const std::string& v, int l) { c.scan.seeds = bounded(v, l, 8, 1 << 16, "seeds"); }},
        {"horizon", [](RunConfig& c, const std::string& v, int l) { c.scan.horizon = positive(v, l); }}}},
      {"verify",
       {{"chi", [](RunConfig& c, const std::string& v, int l) { c.verify.chi = to_long(v, l); }},
        {"morse", [](RunConfig& c, const std::string& v, int l) { c.verify.morse = to_bool(v, l); }},
        {"lambda_samples",
         [](RunConfig& c, const std::string& v, int l) { c.verify.lambda_samples = to_list(v, l); }}}},
  };
  return t;
}

void check_rect(const Rect& r, const char* section) {
  try {
    r.validate();
  } catch (const std::exception& e) {
    throw ParseError(0, std::string("[") + section + "] " + e.what());
  }
}

}  // namespace

VectorFieldSpec RunConfig::spec() const {
  if (field.name) return catalogue(*field.name);
  return parse_vector_field(*field.p, *field.q);
}

BlockOptions RunConfig::block_options() const {
  BlockOptions o;
  o.face.samples = face_samples;
  o.face.tol = tolerances.face_tol;
  o.max_depth = max_depth;
  return o;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::string section;
  std::set<std::pair<std::string, std::string>> seen;
  std::map<std::string, int> field_lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (const auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(line, "unterminated section header");
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      if (!table().count(section)) throw UnknownKey("line " + std::to_string(line) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (section.empty()) throw ParseError(line, "key '" + key + "' outside of any section");
    if (key.empty()) throw ParseError(line, "empty key");
    if (value.empty()) throw ParseError(line, "empty value for '" + key + "'");
    const auto& keys = table().at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) {
      throw UnknownKey("line " + std::to_string(line) + ": unknown key '" + key + "' in [" + section + "]");
    }
    if (!seen.emplace(section, key).second) throw ParseError(line, "duplicate key '" + key + "'");
    it->second(c, value, line);
    if (section == "field") field_lines[key] = line;
  }

  const bool has_name = c.field.name.has_value();
  const bool has_expr = c.field.p.has_value() || c.field.q.has_value();
  if (!has_name && !has_expr) throw MissingRequired("[field] needs either name or p and q");
  if (has_name && has_expr) throw ParseError(field_lines.at("name"), "[field] takes either name or p and q, not both");
  if (has_expr && !(c.field.p && c.field.q)) throw MissingRequired("[field] needs both p and q");
  if (has_name && !in_catalogue(*c.field.name)) {
    throw ParseError(field_lines.at("name"), "unknown catalogue field '" + *c.field.name + "'");
  }
  if (has_expr) {
    for (const auto& [key, expr] : {std::pair{"p", *c.field.p}, std::pair{"q", *c.field.q}}) {
      try {
        (void)parse_field(expr);
      } catch (const Error& e) {
        throw ParseError(field_lines.at(key), std::string("bad expression for ") + key + ": " + e.what());
      }
    }
  }
  if (c.depth > c.max_depth) throw ParseError(0, "depth exceeds max_depth");
  check_rect(c.domain, "domain");
  check_rect(c.integration.domain, "integration");
  if (c.shape.kind == BlockShape::Kind::Disc) {
    if (!seen.count({"block", "radius"})) throw MissingRequired("[block] shape = disc needs radius");
    c.shape.r0 = 0.0;
    c.shape.r1 = c.shape.radius;
  }
  if (c.shape.kind == BlockShape::Kind::Annulus) {
    if (!seen.count({"block", "r0"}) || !seen.count({"block", "r1"})) {
      throw MissingRequired("[block] shape = annulus needs r0 and r1");
    }
    if (!(c.shape.r0 >= 0.0 && c.shape.r0 < c.shape.r1)) throw ParseError(0, "[block] needs 0 <= r0 < r1");
    c.shape.radius = c.shape.r1;
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

nlohmann::json RunConfig::echo() const {
  using nlohmann::json;
  json f = json::object();
  if (field.name) f["name"] = *field.name;
  if (field.p) f["p"] = *field.p;
  if (field.q) f["q"] = *field.q;
  if (field.lambda) f["lambda"] = *field.lambda;
  const VectorFieldSpec s = spec();
  f["expression"] = {{"p", s.p().to_string()}, {"q", s.q().to_string()}};

  auto rect = [](const Rect& r) { return json{{"x0", r.x0}, {"x1", r.x1}, {"y0", r.y0}, {"y1", r.y1}}; };
  json block{{"depth", depth}, {"max_depth", max_depth}, {"samples", face_samples}};
  switch (shape.kind) {
    case BlockShape::Kind::Rect: block["shape"] = "rect"; break;
    case BlockShape::Kind::Disc:
      block["shape"] = "disc";
      block["cx"] = shape.center.x;
      block["cy"] = shape.center.y;
      block["radius"] = shape.radius;
      break;
    case BlockShape::Kind::Annulus:
      block["shape"] = "annulus";
      block["cx"] = shape.center.x;
      block["cy"] = shape.center.y;
      block["r0"] = shape.r0;
      block["r1"] = shape.r1;
      break;
  }
  json verify_json{{"morse", verify.morse}, {"lambda_samples", verify.lambda_samples}};
  if (verify.chi) verify_json["chi"] = *verify.chi;
  return json{
      {"field", f},
      {"domain", rect(domain)},
      {"block", block},
      {"tolerances",
       {{"face_tol", tolerances.face_tol},
        {"winding_gap", tolerances.winding_gap},
        {"newton_tol", tolerances.newton_tol},
        {"rel_tol", tolerances.rel_tol},
        {"eps_conv", tolerances.eps_conv},
        {"eps_ret", tolerances.eps_ret}}},
      {"winding",
       {{"cx", winding.center.x}, {"cy", winding.center.y}, {"radius", winding.radius}, {"samples", winding.samples}}},
      {"orbits",
       {{"seed_x", orbits.seed.x}, {"seed_y", orbits.seed.y}, {"direction", orbits.direction}, {"t_max", orbits.t_max}}},
      {"integration",
       {{"domain", rect(integration.domain)},
        {"initial_step", integration.initial_step},
        {"max_step", integration.max_step}}},
      {"scan",
       {{"cx", scan.center.x}, {"cy", scan.center.y}, {"radius", scan.radius}, {"seeds", scan.seeds},
        {"horizon", scan.horizon}}},
      {"verify", verify_json},
  };
}

}  // namespace conley::cli
