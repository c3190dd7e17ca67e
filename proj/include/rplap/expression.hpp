#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace rplap {

struct ExpressionNode;

/// A compiled scalar expression in one variable.
///
/// Grammar:
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('+' | '-') unary | power
///   power  := atom ('^' unary)?
///   atom   := number | variable | call | '(' expr ')'
///   call   := ('sin'|'cos'|'sinh'|'cosh'|'exp') '(' expr ')' | 'pow' '(' expr ',' expr ')'
class Expression {
 public:
  /// Throws ConfigError with the offending position on malformed input.
  static Expression parse(std::string_view text, std::string_view variable);

  double operator()(double x) const;

  const std::string& source() const { return source_; }

 private:
  std::shared_ptr<const ExpressionNode> root_;
  std::string source_;
};

}  // namespace rplap
