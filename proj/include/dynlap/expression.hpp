#pragma once

#include <string>
#include <vector>

namespace dynlap {

/// Arithmetic expression over variables x, y, t.
///
/// Grammar: + - * / ^ (right associative), unary minus, parentheses,
/// numeric literals, the constant `pi`, and the functions sin, cos, exp.
/// Parsed once into a postfix program; evaluation is allocation-free apart
/// from a small fixed stack and is safe to call concurrently.
class Expression {
 public:
  explicit Expression(std::string source);

  double operator()(double x, double y, double t) const;

  const std::string& source() const { return source_; }

 private:
  enum class Op : unsigned char { Const, VarX, VarY, VarT, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };
  struct Instr {
    Op op;
    double value;
  };

  friend class ExpressionParser;

  std::string source_;
  std::vector<Instr> program_;
  std::size_t max_depth_ = 0;
};

}  // namespace dynlap
