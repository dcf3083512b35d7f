#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace conley {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

double dot(Point a, Point b);
double cross(Point a, Point b);
double norm(Point a);

enum class Variable { X, Y, Lambda };
enum class BinaryOp { Add, Sub, Mul, Div };

const char* to_string(Variable v);

/// Immutable expression tree over x, y and lambda. Nodes are shared, so
/// copies are cheap and safe to pass between threads.
class FieldExpr {
 public:
  enum class Kind { Literal, Var, Binary, Negate, Power };

  static FieldExpr literal(double value);
  static FieldExpr variable(Variable v);
  static FieldExpr binary(BinaryOp op, FieldExpr lhs, FieldExpr rhs);
  static FieldExpr negate(FieldExpr operand);
  static FieldExpr power(FieldExpr base, unsigned exponent);

  Kind kind() const;
  double value() const;       // Literal
  Variable var() const;       // Var
  BinaryOp op() const;        // Binary
  unsigned exponent() const;  // Power
  const FieldExpr& lhs() const;      // Binary, Negate (operand), Power (base)
  const FieldExpr& rhs() const;      // Binary

  /// Throws EvaluationError on division by zero.
  double eval(double x, double y, double lambda = 0.0) const;

  bool uses(Variable v) const;
  bool is_literal(double v) const;

  /// Fully parenthesized form; parse_field(to_string()) evaluates identically.
  std::string to_string() const;

  friend bool operator==(const FieldExpr& a, const FieldExpr& b);

 private:
  struct Node;
  explicit FieldExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Precedence: ^ > unary minus > * / > + -, same-precedence binary ops are
/// left-associative, exponents must be nonnegative integer literals.
FieldExpr parse_field(std::string_view text);

/// Symbolic partial derivative with constant folding only.
FieldExpr differentiate(const FieldExpr& expr, Variable var);

class VectorFieldSpec {
 public:
  VectorFieldSpec(FieldExpr p, FieldExpr q, std::optional<std::string> name = std::nullopt);

  const FieldExpr& p() const { return p_; }
  const FieldExpr& q() const { return q_; }
  const std::optional<std::string>& name() const { return name_; }

  /// True when lambda occurs free in either component.
  bool is_family() const;

  /// Throws MissingParameter if the field is a family and no lambda is given.
  Point eval(Point pt, std::optional<double> lambda = std::nullopt) const;

 private:
  FieldExpr p_;
  FieldExpr q_;
  std::optional<std::string> name_;
};

VectorFieldSpec parse_vector_field(std::string_view p, std::string_view q,
                                   std::optional<std::string> name = std::nullopt);

/// Component-wise negation, the generator of the reverse flow.
VectorFieldSpec reverse(const VectorFieldSpec& spec);

struct Mat2 {
  double a11, a12, a21, a22;
  double det() const { return a11 * a22 - a12 * a21; }
};

/// A spec with its parameter bound and its Jacobian differentiated once.
class PlanarField {
 public:
  explicit PlanarField(VectorFieldSpec spec, std::optional<double> lambda = std::nullopt);

  Point operator()(Point pt) const;
  Mat2 jacobian(Point pt) const;
  const VectorFieldSpec& spec() const { return spec_; }
  double lambda() const { return lambda_; }

 private:
  VectorFieldSpec spec_;
  double lambda_ = 0.0;
  std::array<FieldExpr, 4> jac_;
};

/// Named fields: node, source, saddle, zpow2, zbarpow2, doublewell, hopf,
/// saddle_family. Throws std::out_of_range for unknown names.
const VectorFieldSpec& catalogue(std::string_view name);
bool in_catalogue(std::string_view name);
std::vector<std::string> catalogue_names();

}  // namespace conley
