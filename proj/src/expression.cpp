#include "specflow/expression.hpp"

#include <cctype>
#include <vector>

#include "specflow/error.hpp"

namespace specflow {

struct Expression::Node {
  enum class Kind { Literal, Alpha, Neg, Add, Sub, Mul, Div, Sqrt } kind;
  mpq_class value;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, std::vector<NodePtr> args = {}, mpq_class value = 0) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->args = std::move(args);
  n->value = std::move(value);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::InvalidArgument, "expression '" + text_ + "': " + why);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) lhs = make(Kind::Add, {lhs, term()});
      else if (eat('-')) lhs = make(Kind::Sub, {lhs, term()});
      else return lhs;
    }
  }
  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (eat('*')) lhs = make(Kind::Mul, {lhs, factor()});
      else if (eat('/')) lhs = make(Kind::Div, {lhs, factor()});
      else return lhs;
    }
  }
  NodePtr factor() {
    skip();
    if (eat('-')) return make(Kind::Neg, {factor()});
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
      return make(Kind::Literal, {}, parse_rational(text_.substr(start, pos_ - start)));
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "alpha") return make(Kind::Alpha);
    if (name == "sqrt") {
      if (!eat('(')) fail("expected '(' after sqrt");
      NodePtr n = expr();
      if (!eat(')')) fail("missing ')'");
      return make(Kind::Sqrt, {n});
    }
    fail(name.empty() ? "expected a term" : "unknown name '" + name + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

RationalInterval eval_node(const Expression::Node& n, const cf::CFContext& ctx, unsigned work) {
  switch (n.kind) {
    case Kind::Literal: return RationalInterval::point(n.value);
    case Kind::Alpha: return ctx.alpha_enclosure(work);
    case Kind::Neg: return -eval_node(*n.args[0], ctx, work);
    case Kind::Add: return eval_node(*n.args[0], ctx, work) + eval_node(*n.args[1], ctx, work);
    case Kind::Sub: return eval_node(*n.args[0], ctx, work) - eval_node(*n.args[1], ctx, work);
    case Kind::Mul:
      return round_outward(eval_node(*n.args[0], ctx, work) * eval_node(*n.args[1], ctx, work), work + 8);
    case Kind::Div:
      return round_outward(eval_node(*n.args[0], ctx, work) / eval_node(*n.args[1], ctx, work), work + 8);
    case Kind::Sqrt: return sqrt_enclosure(eval_node(*n.args[0], ctx, work), work + 8);
  }
  throw Error(ErrorKind::InvalidArgument, "corrupt expression node");
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

RationalInterval Expression::evaluate(const cf::CFContext& ctx, unsigned bits) const {
  for (unsigned work = bits + 16; work <= precision_cap_bits(); work *= 2) {
    const RationalInterval v = eval_node(*root_, ctx, work);
    if (v.narrower_than_bits(bits)) return v;
  }
  throw Error(ErrorKind::PrecisionExhausted, "expression '" + text_ + "' cannot reach " + std::to_string(bits) + " bits");
}

}  // namespace specflow
