#include <cmath>
#include <string>

#include "crosscap/error.hpp"
#include "crosscap/expr.hpp"

namespace crosscap {
namespace {

Elementary elementary_for(UnaryOp op) {
  switch (op) {
    case UnaryOp::sin: return {ElementaryKind::sin};
    case UnaryOp::cos: return {ElementaryKind::cos};
    case UnaryOp::exp: return {ElementaryKind::exp};
    case UnaryOp::log: return {ElementaryKind::log};
    case UnaryOp::sqrt: return {ElementaryKind::sqrt};
    case UnaryOp::neg: break;
  }
  throw ContractViolation("negation is not an elementary function");
}

double lookup(const ParameterTable& params, const std::string& name) {
  const auto it = params.find(name);
  if (it == params.end()) throw UnboundParameter(name);
  return it->second;
}

// f(c + h) where `full` = c + h.
Jet2 apply_elementary(Elementary fn, Jet2 full) {
  const double center = full(0, 0);
  full(0, 0) = 0.0;
  return elementary(fn, full, center);
}

}  // namespace

Jet2 eval_jet(const Expr& e, const ParameterTable& params, double u0, double v0, int order) {
  return std::visit(
      [&](const auto& x) -> Jet2 {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return Jet2::constant(order, x.value);
        } else if constexpr (std::is_same_v<T, Parameter>) {
          return Jet2::constant(order, lookup(params, x.name));
        } else if constexpr (std::is_same_v<T, Variable>) {
          Jet2 r = x == Variable::u ? Jet2::variable_u(order) : Jet2::variable_v(order);
          r(0, 0) = x == Variable::u ? u0 : v0;
          return r;
        } else if constexpr (std::is_same_v<T, Unary>) {
          Jet2 child = eval_jet(*x.child, params, u0, v0, order);
          if (x.op == UnaryOp::neg) return -std::move(child);
          return apply_elementary(elementary_for(x.op), std::move(child));
        } else {
          Jet2 lhs = eval_jet(*x.lhs, params, u0, v0, order);
          if (x.op == BinaryOp::pow) {
            const int n = static_cast<int>(std::get<Constant>(x.rhs->node()).value);
            return apply_elementary({ElementaryKind::pow_int, n}, std::move(lhs));
          }
          Jet2 rhs = eval_jet(*x.rhs, params, u0, v0, order);
          switch (x.op) {
            case BinaryOp::add: return lhs + rhs;
            case BinaryOp::sub: return lhs - rhs;
            case BinaryOp::mul: return lhs * rhs;
            case BinaryOp::div:
              if (rhs(0, 0) == 0.0) throw DomainError("division by an expression vanishing at the base point");
              return lhs * apply_elementary({ElementaryKind::pow_int, -1}, std::move(rhs));
            case BinaryOp::pow: break;
          }
          throw ContractViolation("unreachable binary operator");
        }
      },
      e.node());
}

double eval_point(const Expr& e, const ParameterTable& params, double u, double v) {
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, Parameter>) {
          return lookup(params, x.name);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return x == Variable::u ? u : v;
        } else if constexpr (std::is_same_v<T, Unary>) {
          const double a = eval_point(*x.child, params, u, v);
          switch (x.op) {
            case UnaryOp::neg: return -a;
            case UnaryOp::sin: return std::sin(a);
            case UnaryOp::cos: return std::cos(a);
            case UnaryOp::exp: return std::exp(a);
            case UnaryOp::log:
              if (!(a > 0.0)) throw DomainError("log: argument is not positive");
              return std::log(a);
            case UnaryOp::sqrt:
              if (a < 0.0) throw DomainError("sqrt: argument is negative");
              return std::sqrt(a);
          }
          throw ContractViolation("unreachable unary operator");
        } else {
          const double a = eval_point(*x.lhs, params, u, v);
          if (x.op == BinaryOp::pow) {
            const int n = static_cast<int>(std::get<Constant>(x.rhs->node()).value);
            if (a == 0.0 && n < 0) throw DomainError("pow: negative exponent at zero");
            return std::pow(a, n);
          }
          const double b = eval_point(*x.rhs, params, u, v);
          switch (x.op) {
            case BinaryOp::add: return a + b;
            case BinaryOp::sub: return a - b;
            case BinaryOp::mul: return a * b;
            case BinaryOp::div:
              if (b == 0.0) throw DomainError("division by zero");
              return a / b;
            case BinaryOp::pow: break;
          }
          throw ContractViolation("unreachable binary operator");
        }
      },
      e.node());
}

MapDefinition MapDefinition::parse(const std::array<std::string, 3>& sources, ParameterTable parameters,
                                   int default_order) {
  MapDefinition d;
  for (std::size_t i = 0; i < 3; ++i) d.components[i] = parse_expr(sources[i]);
  d.parameters = std::move(parameters);
  d.default_order = default_order;
  return d;
}

MapDefinition MapDefinition::with_parameter(const std::string& name, double value) const {
  MapDefinition d = *this;
  d.parameters[name] = value;
  return d;
}

MapJet3 eval_map_jet(const MapDefinition& defn, const Eigen::Vector2d& base, int order) {
  if (order < 0) throw ContractViolation("eval_map_jet: negative order");
  std::array<Jet2, 3> comps;
  Eigen::Vector3d value;
  for (int i = 0; i < 3; ++i) {
    try {
      Jet2 full = eval_jet(*defn.components[static_cast<std::size_t>(i)], defn.parameters, base.x(),
                           base.y(), order);
      value[i] = full(0, 0);
      full(0, 0) = 0.0;
      comps[static_cast<std::size_t>(i)] = std::move(full);
    } catch (const DomainError& err) {
      throw DomainError(std::string(err.what()) + " (component " + std::to_string(i) + ")", i);
    }
  }
  for (const Jet2& c : comps) {
    for (double x : c.coeffs()) {
      if (!std::isfinite(x)) throw DomainError("non-finite Taylor coefficient");
    }
  }
  if (!value.allFinite()) throw DomainError("non-finite map value");
  return MapJet3(std::move(comps), base, value);
}

Eigen::Vector3d eval_map_point(const MapDefinition& defn, const Eigen::Vector2d& q) {
  Eigen::Vector3d r;
  for (int i = 0; i < 3; ++i) {
    try {
      r[i] = eval_point(*defn.components[static_cast<std::size_t>(i)], defn.parameters, q.x(), q.y());
    } catch (const DomainError& err) {
      throw DomainError(std::string(err.what()) + " (component " + std::to_string(i) + ")", i);
    }
  }
  if (!r.allFinite()) throw DomainError("non-finite map value");
  return r;
}

MapFirstOrder eval_map_first_order(const MapDefinition& defn, const Eigen::Vector2d& q) {
  const MapJet3 jet = eval_map_jet(defn, q, 1);
  MapFirstOrder r;
  r.value = jet.base_value();
  r.jacobian.col(0) = jet.f_u();
  r.jacobian.col(1) = jet.f_v();
  return r;
}

}  // namespace crosscap
