#pragma once

#include <stdexcept>
#include <string>

namespace conley {

/// Base class for every failure raised by the toolkit. `kind()` is the
/// stable identifier written into reports (e.g. "InternalTangency").
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define CONLEY_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

// field
CONLEY_DEFINE_ERROR(UnknownVariable);
CONLEY_DEFINE_ERROR(MissingParameter);
CONLEY_DEFINE_ERROR(EvaluationError);

// complex / homology
CONLEY_DEFINE_ERROR(EmptySet);
CONLEY_DEFINE_ERROR(NotSubcomplex);

// block
CONLEY_DEFINE_ERROR(DepthExhausted);

// analysis
CONLEY_DEFINE_ERROR(VanishingOnCurve);
CONLEY_DEFINE_ERROR(NonConvergent);
CONLEY_DEFINE_ERROR(NotApplicable);
CONLEY_DEFINE_ERROR(NotDivisible);

// orbits
CONLEY_DEFINE_ERROR(StepUnderflow);

// cli
CONLEY_DEFINE_ERROR(UnknownKey);
CONLEY_DEFINE_ERROR(MissingRequired);
CONLEY_DEFINE_ERROR(IoError);

#undef CONLEY_DEFINE_ERROR

/// Malformed field expression. `position` is the 0-based character offset
/// of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string token, std::string expected)
      : Error("SyntaxError", "syntax error at position " + std::to_string(position) +
                                 " near '" + token + "': expected " + expected),
        position_(position),
        token_(std::move(token)),
        expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& token() const noexcept { return token_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string token_;
  std::string expected_;
};

/// Config file error with a 1-based line number (0 when not line-specific).
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error("ParseError", "line " + std::to_string(line) + ": " + message), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Raised when block construction meets an internal or degenerate tangency.
/// The certificate is the tangency location and the second-order value h.
class InternalTangency : public Error {
 public:
  InternalTangency(double x, double y, double h, bool degenerate)
      : Error("InternalTangency",
              std::string(degenerate ? "degenerate" : "internal") + " tangency at (" +
                  std::to_string(x) + ", " + std::to_string(y) + "), h = " + std::to_string(h)),
        x_(x),
        y_(y),
        h_(h),
        degenerate_(degenerate) {}

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double h() const noexcept { return h_; }
  bool degenerate() const noexcept { return degenerate_; }

 private:
  double x_, y_, h_;
  bool degenerate_;
};

/// Continuation could not be certified: the block fails at this parameter.
class BlockFailsAtLambda : public Error {
 public:
  BlockFailsAtLambda(double lambda, const std::string& cause)
      : Error("BlockFailsAtLambda",
              "block construction fails at lambda = " + std::to_string(lambda) + ": " + cause),
        lambda_(lambda) {}

  double lambda() const noexcept { return lambda_; }

 private:
  double lambda_;
};

}  // namespace conley
