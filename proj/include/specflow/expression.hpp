#pragma once

#include <memory>
#include <string>

#include "specflow/cf_arith.hpp"
#include "specflow/interval.hpp"

namespace specflow {

/// Real-valued expression used to declare basis symbols, e.g. "sqrt(3)",
/// "alpha*sqrt(3)", "sqrt(5)-2". Grammar: + - * /, unary minus, parentheses,
/// rational or decimal literals, the name `alpha`, and sqrt(...).
class Expression {
 public:
  static Expression parse(const std::string& text);

  /// Certified enclosure of width <= 2^-bits.
  RationalInterval evaluate(const cf::CFContext& ctx, unsigned bits) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace specflow
