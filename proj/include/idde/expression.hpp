#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace idde {

namespace detail {
struct ExprNode;
}

/// Immutable parsed expression in the single variable t.
///
/// Grammar:
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := number | "t" | "e" | "pi" | func "(" expr ")" | "(" expr ")" | "-" factor
///   func   := sin | cos | exp | ln | abs | max2 | min2
/// max2 and min2 take two comma-separated arguments.
class Expression {
 public:
  /// Throws SyntaxError (with byte offset) or UnknownIdentifier.
  static Expression parse(std::string_view text);

  double operator()(double t) const;

  /// Fully parenthesized text that parses back to an equivalent tree.
  std::string to_string() const;

  /// True when the tree contains no reference to t.
  bool is_constant() const;

 private:
  explicit Expression(std::shared_ptr<const detail::ExprNode> root) : root_(std::move(root)) {}
  std::shared_ptr<const detail::ExprNode> root_;
};

}  // namespace idde
