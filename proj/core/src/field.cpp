#include "conley/field.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "conley/errors.hpp"

namespace conley {

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a) { return std::hypot(a.x, a.y); }

const char* to_string(Variable v) {
  switch (v) {
    case Variable::X: return "x";
    case Variable::Y: return "y";
    case Variable::Lambda: return "lambda";
  }
  return "?";
}

struct FieldExpr::Node {
  Kind kind = Kind::Literal;
  double value = 0.0;
  Variable var = Variable::X;
  BinaryOp op = BinaryOp::Add;
  unsigned exponent = 0;
  std::optional<FieldExpr> lhs;
  std::optional<FieldExpr> rhs;
};

FieldExpr FieldExpr::literal(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Literal;
  n->value = value;
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::variable(Variable v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->var = v;
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::binary(BinaryOp op, FieldExpr lhs, FieldExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::negate(FieldExpr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negate;
  n->lhs = std::move(operand);
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::power(FieldExpr base, unsigned exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->exponent = exponent;
  n->lhs = std::move(base);
  return FieldExpr(std::move(n));
}

FieldExpr::Kind FieldExpr::kind() const { return node_->kind; }
double FieldExpr::value() const { return node_->value; }
Variable FieldExpr::var() const { return node_->var; }
BinaryOp FieldExpr::op() const { return node_->op; }
unsigned FieldExpr::exponent() const { return node_->exponent; }
const FieldExpr& FieldExpr::lhs() const { return *node_->lhs; }
const FieldExpr& FieldExpr::rhs() const { return *node_->rhs; }

namespace {

double ipow(double base, unsigned n) {
  double result = 1.0;
  while (n != 0) {
    if (n & 1u) result *= base;
    base *= base;
    n >>= 1u;
  }
  return result;
}

}  // namespace

double FieldExpr::eval(double x, double y, double lambda) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Literal:
      return n.value;
    case Kind::Var:
      return n.var == Variable::X ? x : n.var == Variable::Y ? y : lambda;
    case Kind::Negate:
      return -n.lhs->eval(x, y, lambda);
    case Kind::Power:
      return ipow(n.lhs->eval(x, y, lambda), n.exponent);
    case Kind::Binary: {
      const double a = n.lhs->eval(x, y, lambda);
      const double b = n.rhs->eval(x, y, lambda);
      switch (n.op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
          if (b == 0.0) {
            throw EvaluationError("division by zero evaluating " + to_string() + " at (" +
                                  std::to_string(x) + ", " + std::to_string(y) + ")");
          }
          return a / b;
      }
    }
  }
  return 0.0;
}

bool FieldExpr::uses(Variable v) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Literal: return false;
    case Kind::Var: return n.var == v;
    case Kind::Negate:
    case Kind::Power: return n.lhs->uses(v);
    case Kind::Binary: return n.lhs->uses(v) || n.rhs->uses(v);
  }
  return false;
}

bool FieldExpr::is_literal(double v) const {
  return node_->kind == Kind::Literal && node_->value == v;
}

std::string FieldExpr::to_string() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Literal: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", std::fabs(n.value));
      return std::signbit(n.value) ? "(-" + std::string(buf) + ")" : std::string(buf);
    }
    case Kind::Var:
      return conley::to_string(n.var);
    case Kind::Negate:
      return "(-" + n.lhs->to_string() + ")";
    case Kind::Power:
      return "(" + n.lhs->to_string() + "^" + std::to_string(n.exponent) + ")";
    case Kind::Binary: {
      static constexpr const char* kOps[] = {" + ", " - ", " * ", " / "};
      return "(" + n.lhs->to_string() + kOps[static_cast<int>(n.op)] + n.rhs->to_string() + ")";
    }
  }
  return {};
}

bool operator==(const FieldExpr& a, const FieldExpr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case FieldExpr::Kind::Literal: return x.value == y.value;
    case FieldExpr::Kind::Var: return x.var == y.var;
    case FieldExpr::Kind::Negate: return *x.lhs == *y.lhs;
    case FieldExpr::Kind::Power: return x.exponent == y.exponent && *x.lhs == *y.lhs;
    case FieldExpr::Kind::Binary: return x.op == y.op && *x.lhs == *y.lhs && *x.rhs == *y.rhs;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok type;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    Tok t;
    switch (c) {
      case '+': t = Tok::Plus; break;
      case '-': t = Tok::Minus; break;
      case '*': t = Tok::Star; break;
      case '/': t = Tok::Slash; break;
      case '^': t = Tok::Caret; break;
      case '(': t = Tok::LParen; break;
      case ')': t = Tok::RParen; break;
      default: throw SyntaxError(start, std::string(1, c), "an operator, number or variable");
    }
    out.push_back({t, std::string(1, c), start});
    ++i;
  }
  out.push_back({Tok::End, "<end>", s.size()});
  return out;
}

constexpr int kAdditive = 1;
constexpr int kMultiplicative = 2;
constexpr int kUnary = 3;
constexpr int kPower = 4;

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  FieldExpr parse() {
    FieldExpr e = expression(kAdditive);
    if (peek().type != Tok::End) throw SyntaxError(peek().pos, peek().text, "an operator or end of input");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  static int infix_precedence(Tok t) {
    switch (t) {
      case Tok::Plus:
      case Tok::Minus: return kAdditive;
      case Tok::Star:
      case Tok::Slash: return kMultiplicative;
      case Tok::Caret: return kPower;
      default: return 0;
    }
  }

  FieldExpr prefix() {
    const Token& t = next();
    switch (t.type) {
      case Tok::Number: {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(t.text, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != t.text.size()) throw SyntaxError(t.pos, t.text, "a number");
        return FieldExpr::literal(v);
      }
      case Tok::Ident:
        if (t.text == "x") return FieldExpr::variable(Variable::X);
        if (t.text == "y") return FieldExpr::variable(Variable::Y);
        if (t.text == "lambda") return FieldExpr::variable(Variable::Lambda);
        throw UnknownVariable("unknown variable '" + t.text + "' at position " +
                              std::to_string(t.pos) + " (allowed: x, y, lambda)");
      case Tok::Minus:
        return FieldExpr::negate(expression(kUnary));
      case Tok::LParen: {
        FieldExpr inner = expression(kAdditive);
        if (peek().type != Tok::RParen) throw SyntaxError(peek().pos, peek().text, "')'");
        next();
        return inner;
      }
      default:
        throw SyntaxError(t.pos, t.text, "a number, variable, '-' or '('");
    }
  }

  FieldExpr expression(int min_prec) {
    FieldExpr lhs = prefix();
    for (;;) {
      const Token& op = peek();
      const int prec = infix_precedence(op.type);
      if (prec == 0 || prec < min_prec) break;
      next();
      if (op.type == Tok::Caret) {
        const Token& e = next();
        const bool integral = e.type == Tok::Number &&
                              e.text.find_first_not_of("0123456789") == std::string::npos;
        if (!integral) throw SyntaxError(e.pos, e.text, "a nonnegative integer exponent");
        unsigned long n = 0;
        try {
          n = std::stoul(e.text);
        } catch (const std::exception&) {
          throw SyntaxError(e.pos, e.text, "an exponent that fits in 32 bits");
        }
        lhs = FieldExpr::power(std::move(lhs), static_cast<unsigned>(n));
        continue;
      }
      FieldExpr rhs = expression(prec + 1);
      BinaryOp bop = op.type == Tok::Plus    ? BinaryOp::Add
                     : op.type == Tok::Minus ? BinaryOp::Sub
                     : op.type == Tok::Star  ? BinaryOp::Mul
                                             : BinaryOp::Div;
      lhs = FieldExpr::binary(bop, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

FieldExpr parse_field(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Differentiation with constant folding

namespace {

using E = FieldExpr;

E lit(double v) { return E::literal(v); }

E add(const E& a, const E& b) {
  if (a.kind() == E::Kind::Literal && b.kind() == E::Kind::Literal) return lit(a.value() + b.value());
  if (a.is_literal(0.0)) return b;
  if (b.is_literal(0.0)) return a;
  return E::binary(BinaryOp::Add, a, b);
}

E neg(const E& a) {
  if (a.kind() == E::Kind::Literal) return lit(-a.value());
  return E::negate(a);
}

E sub(const E& a, const E& b) {
  if (a.kind() == E::Kind::Literal && b.kind() == E::Kind::Literal) return lit(a.value() - b.value());
  if (b.is_literal(0.0)) return a;
  if (a.is_literal(0.0)) return neg(b);
  return E::binary(BinaryOp::Sub, a, b);
}

E mul(const E& a, const E& b) {
  if (a.kind() == E::Kind::Literal && b.kind() == E::Kind::Literal) return lit(a.value() * b.value());
  if (a.is_literal(0.0) || b.is_literal(0.0)) return lit(0.0);
  if (a.is_literal(1.0)) return b;
  if (b.is_literal(1.0)) return a;
  return E::binary(BinaryOp::Mul, a, b);
}

E div(const E& a, const E& b) {
  if (b.is_literal(1.0)) return a;
  if (a.is_literal(0.0) && b.kind() == E::Kind::Literal && b.value() != 0.0) return lit(0.0);
  if (a.kind() == E::Kind::Literal && b.kind() == E::Kind::Literal && b.value() != 0.0)
    return lit(a.value() / b.value());
  return E::binary(BinaryOp::Div, a, b);
}

E pow(const E& a, unsigned n) {
  if (n == 0) return lit(1.0);
  if (n == 1) return a;
  if (a.kind() == E::Kind::Literal) return lit(std::pow(a.value(), static_cast<double>(n)));
  return E::power(a, n);
}

}  // namespace

FieldExpr differentiate(const FieldExpr& e, Variable v) {
  switch (e.kind()) {
    case E::Kind::Literal: return lit(0.0);
    case E::Kind::Var: return lit(e.var() == v ? 1.0 : 0.0);
    case E::Kind::Negate: return neg(differentiate(e.lhs(), v));
    case E::Kind::Power: {
      const E& u = e.lhs();
      const unsigned n = e.exponent();
      if (n == 0) return lit(0.0);
      return mul(mul(lit(static_cast<double>(n)), pow(u, n - 1)), differentiate(u, v));
    }
    case E::Kind::Binary: {
      const E& a = e.lhs();
      const E& b = e.rhs();
      switch (e.op()) {
        case BinaryOp::Add: return add(differentiate(a, v), differentiate(b, v));
        case BinaryOp::Sub: return sub(differentiate(a, v), differentiate(b, v));
        case BinaryOp::Mul: return add(mul(differentiate(a, v), b), mul(a, differentiate(b, v)));
        case BinaryOp::Div:
          return div(sub(mul(differentiate(a, v), b), mul(a, differentiate(b, v))), pow(b, 2));
      }
    }
  }
  return lit(0.0);
}

// ---------------------------------------------------------------------------

VectorFieldSpec::VectorFieldSpec(FieldExpr p, FieldExpr q, std::optional<std::string> name)
    : p_(std::move(p)), q_(std::move(q)), name_(std::move(name)) {}

bool VectorFieldSpec::is_family() const {
  return p_.uses(Variable::Lambda) || q_.uses(Variable::Lambda);
}

Point VectorFieldSpec::eval(Point pt, std::optional<double> lambda) const {
  if (is_family() && !lambda) {
    throw MissingParameter("field " + name_.value_or("<anonymous>") +
                           " depends on lambda but no value was supplied");
  }
  const double l = lambda.value_or(0.0);
  return {p_.eval(pt.x, pt.y, l), q_.eval(pt.x, pt.y, l)};
}

VectorFieldSpec parse_vector_field(std::string_view p, std::string_view q,
                                   std::optional<std::string> name) {
  return VectorFieldSpec(parse_field(p), parse_field(q), std::move(name));
}

VectorFieldSpec reverse(const VectorFieldSpec& spec) {
  std::optional<std::string> name;
  if (spec.name()) name = "reverse(" + *spec.name() + ")";
  return VectorFieldSpec(neg(spec.p()), neg(spec.q()), std::move(name));
}

PlanarField::PlanarField(VectorFieldSpec spec, std::optional<double> lambda)
    : spec_(std::move(spec)),
      jac_{differentiate(spec_.p(), Variable::X), differentiate(spec_.p(), Variable::Y),
           differentiate(spec_.q(), Variable::X), differentiate(spec_.q(), Variable::Y)} {
  if (spec_.is_family() && !lambda) {
    throw MissingParameter("field " + spec_.name().value_or("<anonymous>") +
                           " depends on lambda but no value was supplied");
  }
  lambda_ = lambda.value_or(0.0);
}

Point PlanarField::operator()(Point pt) const {
  return {spec_.p().eval(pt.x, pt.y, lambda_), spec_.q().eval(pt.x, pt.y, lambda_)};
}

Mat2 PlanarField::jacobian(Point pt) const {
  return {jac_[0].eval(pt.x, pt.y, lambda_), jac_[1].eval(pt.x, pt.y, lambda_),
          jac_[2].eval(pt.x, pt.y, lambda_), jac_[3].eval(pt.x, pt.y, lambda_)};
}

namespace {

const std::map<std::string, VectorFieldSpec, std::less<>>& catalogue_map() {
  static const auto* entries = [] {
    auto* m = new std::map<std::string, VectorFieldSpec, std::less<>>;
    auto put = [&](const char* name, const char* p, const char* q) {
      m->emplace(name, parse_vector_field(p, q, std::string(name)));
    };
    put("node", "-x", "-y");
    put("source", "x", "y");
    put("saddle", "x", "-y");
    put("zpow2", "x^2 - y^2", "2*x*y");
    put("zbarpow2", "x^2 - y^2", "-2*x*y");
    put("doublewell", "x - x^3", "-y");
    put("hopf", "x - y - x*(x^2 + y^2)", "x + y - y*(x^2 + y^2)");
    put("saddle_family", "x + 0.3*lambda*y^2", "-y");
    return m;
  }();
  return *entries;
}

}  // namespace

const VectorFieldSpec& catalogue(std::string_view name) {
  const auto& m = catalogue_map();
  auto it = m.find(name);
  if (it == m.end()) throw std::out_of_range("unknown catalogue field '" + std::string(name) + "'");
  return it->second;
}

bool in_catalogue(std::string_view name) { return catalogue_map().count(name) != 0; }

std::vector<std::string> catalogue_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : catalogue_map()) names.push_back(k);
  return names;
}

}  // namespace conley
