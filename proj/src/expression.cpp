#include "idde/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <variant>

#include "idde/error.hpp"

namespace idde {
namespace detail {

enum class Func { Sin, Cos, Exp, Ln, Abs, Max2, Min2 };
enum class BinOp { Add, Sub, Mul, Div };

using NodePtr = std::shared_ptr<const ExprNode>;

struct Number {
  double value;
};
struct Variable {};
struct Negate {
  NodePtr arg;
};
struct Binary {
  BinOp op;
  NodePtr lhs, rhs;
};
struct Call {
  Func func;
  NodePtr a, b;  // b is null for one-argument functions
};

struct ExprNode {
  std::variant<Number, Variable, Negate, Binary, Call> v;
};

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

NodePtr make(auto node) { return std::make_shared<const ExprNode>(ExprNode{std::move(node)}); }

double eval(const ExprNode& n, double t) {
  return std::visit(
      Overloaded{
          [](const Number& x) { return x.value; },
          [t](const Variable&) { return t; },
          [t](const Negate& x) { return -eval(*x.arg, t); },
          [t](const Binary& x) {
            const double l = eval(*x.lhs, t);
            const double r = eval(*x.rhs, t);
            switch (x.op) {
              case BinOp::Add: return l + r;
              case BinOp::Sub: return l - r;
              case BinOp::Mul: return l * r;
              case BinOp::Div: return l / r;
            }
            return 0.0;
          },
          [t](const Call& x) {
            const double a = eval(*x.a, t);
            switch (x.func) {
              case Func::Sin: return std::sin(a);
              case Func::Cos: return std::cos(a);
              case Func::Exp: return std::exp(a);
              case Func::Ln: return std::log(a);
              case Func::Abs: return std::fabs(a);
              case Func::Max2: return std::max(a, eval(*x.b, t));
              case Func::Min2: return std::min(a, eval(*x.b, t));
            }
            return 0.0;
          },
      },
      n.v);
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Abs: return "abs";
    case Func::Max2: return "max2";
    case Func::Min2: return "min2";
  }
  return "?";
}

void print(const ExprNode& n, std::ostream& os) {
  std::visit(Overloaded{
                 [&](const Number& x) { os << std::setprecision(17) << x.value; },
                 [&](const Variable&) { os << 't'; },
                 [&](const Negate& x) {
                   os << "(-";
                   print(*x.arg, os);
                   os << ')';
                 },
                 [&](const Binary& x) {
                   static constexpr char ops[] = {'+', '-', '*', '/'};
                   os << '(';
                   print(*x.lhs, os);
                   os << ' ' << ops[static_cast<int>(x.op)] << ' ';
                   print(*x.rhs, os);
                   os << ')';
                 },
                 [&](const Call& x) {
                   os << func_name(x.func) << '(';
                   print(*x.a, os);
                   if (x.b) {
                     os << ", ";
                     print(*x.b, os);
                   }
                   os << ')';
                 },
             },
             n.v);
}

bool references_t(const ExprNode& n) {
  return std::visit(Overloaded{
                        [](const Number&) { return false; },
                        [](const Variable&) { return true; },
                        [](const Negate& x) { return references_t(*x.arg); },
                        [](const Binary& x) { return references_t(*x.lhs) || references_t(*x.rhs); },
                        [](const Call& x) { return references_t(*x.a) || (x.b && references_t(*x.b)); },
                    },
                    n.v);
}

// Recursive descent over the grammar in expression.hpp.
class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    NodePtr root = expr();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
    return root;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) throw SyntaxError(std::string("expected '") + c + "' but input ended", pos_);
      throw SyntaxError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Binary{BinOp::Add, lhs, term()});
      } else if (accept('-')) {
        lhs = make(Binary{BinOp::Sub, lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make(Binary{BinOp::Mul, lhs, factor()});
      } else if (accept('/')) {
        lhs = make(Binary{BinOp::Div, lhs, factor()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      return make(Negate{factor()});
    }
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw SyntaxError("malformed number", start);
    // An exponent needs at least one digit; otherwise "2e" is left for the
    // caller to reject.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc() || !std::isfinite(value)) throw SyntaxError("number out of range", start);
    return make(Number{value});
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "t") return make(Variable{});
    if (name == "e") return make(Number{std::numbers::e});
    if (name == "pi") return make(Number{std::numbers::pi});

    static constexpr std::pair<std::string_view, Func> funcs[] = {
        {"sin", Func::Sin}, {"cos", Func::Cos},   {"exp", Func::Exp},   {"ln", Func::Ln},
        {"abs", Func::Abs}, {"max2", Func::Max2}, {"min2", Func::Min2},
    };
    for (const auto& [fname, f] : funcs) {
      if (name != fname) continue;
      expect('(');
      NodePtr a = expr();
      NodePtr b;
      if (f == Func::Max2 || f == Func::Min2) {
        expect(',');
        b = expr();
      }
      expect(')');
      return make(Call{f, a, b});
    }
    throw UnknownIdentifier(std::string(name), start);
  }
};

}  // namespace
}  // namespace detail

Expression Expression::parse(std::string_view text) {
  detail::Parser p(text);
  return Expression(p.parse_all());
}

double Expression::operator()(double t) const { return detail::eval(*root_, t); }

std::string Expression::to_string() const {
  std::ostringstream os;
  detail::print(*root_, os);
  return os.str();
}

bool Expression::is_constant() const { return !detail::references_t(*root_); }

}  // namespace idde
