#include "rplap/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "rplap/errors.hpp"

namespace rplap {

struct ExpressionNode {
  enum class Op { kConstant, kVariable, kAdd, kSub, kMul, kDiv, kPow, kNeg, kSin, kCos, kSinh, kCosh, kExp };

  Op op = Op::kConstant;
  double value = 0.0;
  std::vector<std::shared_ptr<const ExpressionNode>> args;

  double eval(double x) const {
    switch (op) {
      case Op::kConstant:
        return value;
      case Op::kVariable:
        return x;
      case Op::kAdd:
        return args[0]->eval(x) + args[1]->eval(x);
      case Op::kSub:
        return args[0]->eval(x) - args[1]->eval(x);
      case Op::kMul:
        return args[0]->eval(x) * args[1]->eval(x);
      case Op::kDiv:
        return args[0]->eval(x) / args[1]->eval(x);
      case Op::kPow:
        return std::pow(args[0]->eval(x), args[1]->eval(x));
      case Op::kNeg:
        return -args[0]->eval(x);
      case Op::kSin:
        return std::sin(args[0]->eval(x));
      case Op::kCos:
        return std::cos(args[0]->eval(x));
      case Op::kSinh:
        return std::sinh(args[0]->eval(x));
      case Op::kCosh:
        return std::cosh(args[0]->eval(x));
      case Op::kExp:
        return std::exp(args[0]->eval(x));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const ExpressionNode>;
using Op = ExpressionNode::Op;

NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0.0) {
  auto node = std::make_shared<ExpressionNode>();
  node->op = op;
  node->value = value;
  node->args = std::move(args);
  return node;
}

class Parser {
 public:
  Parser(std::string_view text, std::string_view variable) : text_(text), variable_(variable) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError("expression '" + std::string(text_) + "': " + message + " at position " +
                      std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Op::kAdd, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Op::kSub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Op::kMul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Op::kDiv, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::kNeg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Op::kPow, {base, unary()});
    return base;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double value = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return make(Op::kConstant, {}, value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == variable_) return make(Op::kVariable);
    if (name == "pi") return make(Op::kConstant, {}, M_PI);

    struct Unary {
      std::string_view name;
      Op op;
    };
    static constexpr Unary kUnary[] = {{"sin", Op::kSin},   {"cos", Op::kCos}, {"sinh", Op::kSinh},
                                       {"cosh", Op::kCosh}, {"exp", Op::kExp}};
    for (const auto& fn : kUnary) {
      if (name == fn.name) {
        expect('(');
        NodePtr arg = expr();
        expect(')');
        return make(fn.op, {arg});
      }
    }
    if (name == "pow") {
      expect('(');
      NodePtr base = expr();
      expect(',');
      NodePtr exponent = expr();
      expect(')');
      return make(Op::kPow, {base, exponent});
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "' (variable is '" + std::string(variable_) +
         "')");
  }

  std::string_view text_;
  std::string_view variable_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text, std::string_view variable) {
  Expression e;
  e.root_ = Parser(text, variable).parse();
  e.source_ = std::string(text);
  return e;
}

double Expression::operator()(double x) const { return root_->eval(x); }

}  // namespace rplap
