#pragma once

// Closed-form map definitions: parsing, printing, and Taylor-mode evaluation.
//
// Grammar (whitespace-insensitive):
//
//   expr     = term { ("+" | "-") term } ;
//   term     = unary { ("*" | "/") unary } ;
//   unary    = "-" unary | power ;
//   power    = primary [ "^" exponent ] ;        (* right associative *)
//   exponent = unary ;                           (* must fold to an integer constant *)
//   primary  = number | "u" | "v" | func "(" expr ")" | identifier | "(" expr ")" ;
//   func     = "sin" | "cos" | "exp" | "log" | "sqrt" ;

#include <array>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Core>

#include "crosscap/jet.hpp"

namespace crosscap {

enum class Variable { u, v };
enum class UnaryOp { neg, sin, cos, exp, log, sqrt };
enum class BinaryOp { add, sub, mul, div, pow };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Constant {
  double value;
};
struct Parameter {
  std::string name;
};
struct Unary {
  UnaryOp op;
  ExprPtr child;
};
/// For pow, rhs is always an integer-valued Constant.
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

/// Immutable expression tree node.
class Expr {
 public:
  using Node = std::variant<Constant, Parameter, Variable, Unary, Binary>;

  explicit Expr(Node node) : node_(std::move(node)) {}

  const Node& node() const noexcept { return node_; }

  /// Finite and non-negative; negative numbers are negation nodes.
  static ExprPtr constant(double value);
  static ExprPtr parameter(std::string name);
  static ExprPtr variable(Variable var);
  static ExprPtr unary(UnaryOp op, ExprPtr child);
  static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr power(ExprPtr base, int exponent);

 private:
  Node node_;
};

/// Structural equality (constants compared bitwise-equal as doubles).
bool structurally_equal(const Expr& a, const Expr& b);

/// Throws ParseError with the byte offset of the offending token.
ExprPtr parse_expr(std::string_view source);

/// Canonical text with minimal parentheses; parse_expr(to_text(e)) is structurally equal to e.
std::string to_text(const Expr& e);

/// Replace u and v by the given expressions.
ExprPtr substitute(const ExprPtr& e, const ExprPtr& u_replacement, const ExprPtr& v_replacement);

using ParameterTable = std::map<std::string, double, std::less<>>;

/// Full (uncentered) Taylor expansion of e at (u0, v0).
Jet2 eval_jet(const Expr& e, const ParameterTable& params, double u0, double v0, int order);

/// Plain value of e at (u, v).
double eval_point(const Expr& e, const ParameterTable& params, double u, double v);

inline constexpr int kDefaultOrder = 6;

/// Three component expressions with a parameter table and default working order.
struct MapDefinition {
  std::array<ExprPtr, 3> components;
  ParameterTable parameters;
  int default_order = kDefaultOrder;

  static MapDefinition parse(const std::array<std::string, 3>& sources, ParameterTable parameters = {},
                             int default_order = kDefaultOrder);

  /// Copy with one parameter rebound.
  MapDefinition with_parameter(const std::string& name, double value) const;
};

/// Taylor expansion of the map at `base`; DomainError carries the component index.
MapJet3 eval_map_jet(const MapDefinition& defn, const Eigen::Vector2d& base, int order);

Eigen::Vector3d eval_map_point(const MapDefinition& defn, const Eigen::Vector2d& q);

/// Value and Jacobian [f_u f_v] at q.
struct MapFirstOrder {
  Eigen::Vector3d value;
  Eigen::Matrix<double, 3, 2> jacobian;
};
MapFirstOrder eval_map_first_order(const MapDefinition& defn, const Eigen::Vector2d& q);

}  // namespace crosscap
