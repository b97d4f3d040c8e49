#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include "crosscap/error.hpp"
#include "crosscap/expr.hpp"

namespace crosscap {

ExprPtr Expr::constant(double value) {
  if (!std::isfinite(value) || std::signbit(value)) {
    throw ContractViolation("expression constants must be finite and non-negative; use negation");
  }
  return std::make_shared<const Expr>(Constant{value});
}
ExprPtr Expr::parameter(std::string name) {
  return std::make_shared<const Expr>(Parameter{std::move(name)});
}
ExprPtr Expr::variable(Variable var) { return std::make_shared<const Expr>(var); }
ExprPtr Expr::unary(UnaryOp op, ExprPtr child) {
  return std::make_shared<const Expr>(Unary{op, std::move(child)});
}
ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  if (op == BinaryOp::pow) {
    const auto* c = std::get_if<Constant>(&rhs->node());
    if (!c || c->value != std::trunc(c->value)) throw ContractViolation("pow exponent must be an integer constant");
  }
  return std::make_shared<const Expr>(Binary{op, std::move(lhs), std::move(rhs)});
}
ExprPtr Expr::power(ExprPtr base, int exponent) {
  return binary(BinaryOp::pow, std::move(base), std::make_shared<const Expr>(Constant{static_cast<double>(exponent)}));
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, Constant>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Parameter>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return x == y;
        } else if constexpr (std::is_same_v<T, Unary>) {
          return x.op == y.op && structurally_equal(*x.child, *y.child);
        } else {
          return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) &&
                 structurally_equal(*x.rhs, *y.rhs);
        }
      },
      a.node());
}

namespace {

std::optional<UnaryOp> function_named(std::string_view name) {
  if (name == "sin") return UnaryOp::sin;
  if (name == "cos") return UnaryOp::cos;
  if (name == "exp") return UnaryOp::exp;
  if (name == "log") return UnaryOp::log;
  if (name == "sqrt") return UnaryOp::sqrt;
  return std::nullopt;
}

const char* function_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::sin: return "sin";
    case UnaryOp::cos: return "cos";
    case UnaryOp::exp: return "exp";
    case UnaryOp::log: return "log";
    case UnaryOp::sqrt: return "sqrt";
    case UnaryOp::neg: return "-";
  }
  return "?";
}

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) { advance(); }

  ExprPtr parse() {
    ExprPtr e = expr();
    if (tok_.kind != Tok::end) fail("expected operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_.offset); }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::end, start, {}};
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number(start);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      tok_ = {Tok::ident, start, src_.substr(start, pos_ - start)};
      return;
    }
    ++pos_;
    switch (c) {
      case '+': tok_ = {Tok::plus, start, src_.substr(start, 1)}; return;
      case '-': tok_ = {Tok::minus, start, src_.substr(start, 1)}; return;
      case '*': tok_ = {Tok::star, start, src_.substr(start, 1)}; return;
      case '/': tok_ = {Tok::slash, start, src_.substr(start, 1)}; return;
      case '^': tok_ = {Tok::caret, start, src_.substr(start, 1)}; return;
      case '(': tok_ = {Tok::lparen, start, src_.substr(start, 1)}; return;
      case ')': tok_ = {Tok::rparen, start, src_.substr(start, 1)}; return;
      default: throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }

  void lex_number(std::size_t start) {
    const auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // 'e' belongs to a following identifier
    }
    const std::string text(src_.substr(start, pos_ - start));
    tok_ = {Tok::number, start, src_.substr(start, pos_ - start), std::strtod(text.c_str(), nullptr)};
    if (!std::isfinite(tok_.number)) throw ParseError("number out of range", start);
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      const BinaryOp op = tok_.kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      advance();
      lhs = Expr::binary(op, lhs, term());
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      const BinaryOp op = tok_.kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
      advance();
      lhs = Expr::binary(op, lhs, unary());
    }
    return lhs;
  }

  ExprPtr unary() {
    if (tok_.kind == Tok::minus) {
      advance();
      return Expr::unary(UnaryOp::neg, unary());
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (tok_.kind != Tok::caret) return base;
    advance();
    const std::size_t at = tok_.offset;
    const ExprPtr rhs = unary();
    const std::optional<double> value = fold_constant(*rhs);
    if (!value) throw ParseError("exponent must be an integer constant", at);
    if (*value != std::round(*value) || std::abs(*value) > 1024.0) {
      throw ParseError("non-integer exponent", at);
    }
    return Expr::power(base, static_cast<int>(*value));
  }

  ExprPtr primary() {
    switch (tok_.kind) {
      case Tok::number: {
        const double value = tok_.number;
        advance();
        return Expr::constant(value);
      }
      case Tok::ident: {
        const std::string_view name = tok_.text;
        advance();
        if (name == "u") return Expr::variable(Variable::u);
        if (name == "v") return Expr::variable(Variable::v);
        if (const auto fn = function_named(name); fn && tok_.kind == Tok::lparen) {
          advance();
          ExprPtr arg = expr();
          expect_rparen();
          return Expr::unary(*fn, std::move(arg));
        }
        return Expr::parameter(std::string(name));
      }
      case Tok::lparen: {
        advance();
        ExprPtr inner = expr();
        expect_rparen();
        return inner;
      }
      default: fail("expected expression");
    }
  }

  void expect_rparen() {
    if (tok_.kind != Tok::rparen) fail("expected ')'");
    advance();
  }

  static std::optional<double> fold_constant(const Expr& e) {
    if (const auto* c = std::get_if<Constant>(&e.node())) return c->value;
    if (const auto* u = std::get_if<Unary>(&e.node()); u && u->op == UnaryOp::neg) {
      if (auto x = fold_constant(*u->child)) return -*x;
      return std::nullopt;
    }
    if (const auto* b = std::get_if<Binary>(&e.node())) {
      const auto x = fold_constant(*b->lhs);
      const auto y = fold_constant(*b->rhs);
      if (!x || !y) return std::nullopt;
      switch (b->op) {
        case BinaryOp::add: return *x + *y;
        case BinaryOp::sub: return *x - *y;
        case BinaryOp::mul: return *x * *y;
        case BinaryOp::div: return *y == 0.0 ? std::nullopt : std::optional<double>(*x / *y);
        case BinaryOp::pow: return std::pow(*x, *y);
      }
    }
    return std::nullopt;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_{Tok::end, 0, {}};
};

// Printing precedence levels; higher binds tighter.
constexpr int kPrecAdd = 1, kPrecMul = 2, kPrecNeg = 3, kPrecPow = 4, kPrecAtom = 5;

int precedence(const Expr& e) {
  if (const auto* b = std::get_if<Binary>(&e.node())) {
    switch (b->op) {
      case BinaryOp::add:
      case BinaryOp::sub: return kPrecAdd;
      case BinaryOp::mul:
      case BinaryOp::div: return kPrecMul;
      case BinaryOp::pow: return kPrecPow;
    }
  }
  if (const auto* u = std::get_if<Unary>(&e.node()); u && u->op == UnaryOp::neg) return kPrecNeg;
  return kPrecAtom;
}

std::string format_number(double x) {
  // Shortest representation that reads back to the same double.
  char buf[40];
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string print(const Expr& e);

std::string wrap(const Expr& e, bool parens) { return parens ? "(" + print(e) + ")" : print(e); }

std::string print(const Expr& e) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return format_number(x.value);
        } else if constexpr (std::is_same_v<T, Parameter>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return x == Variable::u ? "u" : "v";
        } else if constexpr (std::is_same_v<T, Unary>) {
          if (x.op != UnaryOp::neg) return std::string(function_name(x.op)) + "(" + print(*x.child) + ")";
          const bool nested_neg = std::holds_alternative<Unary>(x.child->node()) &&
                                  std::get<Unary>(x.child->node()).op == UnaryOp::neg;
          return "-" + wrap(*x.child, nested_neg || precedence(*x.child) < kPrecNeg);
        } else {
          if (x.op == BinaryOp::pow) {
            const double n = std::get<Constant>(x.rhs->node()).value;
            const std::string exponent = n < 0 ? "(" + format_number(n) + ")" : format_number(n);
            return wrap(*x.lhs, precedence(*x.lhs) < kPrecAtom) + "^" + exponent;
          }
          const int prec = precedence(e);
          const char* sym = x.op == BinaryOp::add   ? " + "
                            : x.op == BinaryOp::sub ? " - "
                            : x.op == BinaryOp::mul ? "*"
                                                    : "/";
          return wrap(*x.lhs, precedence(*x.lhs) < prec) + sym + wrap(*x.rhs, precedence(*x.rhs) <= prec);
        }
      },
      e.node());
}

}  // namespace

ExprPtr parse_expr(std::string_view source) { return Parser(source).parse(); }

std::string to_text(const Expr& e) { return print(e); }

ExprPtr substitute(const ExprPtr& e, const ExprPtr& u_replacement, const ExprPtr& v_replacement) {
  return std::visit(
      [&](const auto& x) -> ExprPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Variable>) {
          return x == Variable::u ? u_replacement : v_replacement;
        } else if constexpr (std::is_same_v<T, Unary>) {
          return Expr::unary(x.op, substitute(x.child, u_replacement, v_replacement));
        } else if constexpr (std::is_same_v<T, Binary>) {
          if (x.op == BinaryOp::pow) return Expr::binary(x.op, substitute(x.lhs, u_replacement, v_replacement), x.rhs);
          return Expr::binary(x.op, substitute(x.lhs, u_replacement, v_replacement),
                              substitute(x.rhs, u_replacement, v_replacement));
        } else {
          return e;
        }
      },
      e->node());
}

}  // namespace crosscap
