#include <cmath>
#include <string>

#include "crosscap/error.hpp"
#include "crosscap/jet.hpp"

namespace crosscap {
namespace {

const char* name_of(ElementaryKind kind) {
  switch (kind) {
    case ElementaryKind::sin: return "sin";
    case ElementaryKind::cos: return "cos";
    case ElementaryKind::exp: return "exp";
    case ElementaryKind::log: return "log";
    case ElementaryKind::sqrt: return "sqrt";
    case ElementaryKind::pow_int: return "pow";
  }
  return "?";
}

// Generalized binomial coefficients C(alpha, k), k = 0..order.
std::vector<double> binomials(double alpha, int order) {
  std::vector<double> c(static_cast<std::size_t>(order + 1));
  c[0] = 1.0;
  for (int k = 1; k <= order; ++k) c[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k - 1)] * (alpha - k + 1) / k;
  return c;
}

}  // namespace

std::vector<double> elementary_series(Elementary fn, double center, int order) {
  if (order < 0) throw ContractViolation("elementary_series: negative order");
  if (!std::isfinite(center)) {
    throw DomainError(std::string(name_of(fn.kind)) + ": non-finite argument");
  }
  std::vector<double> s(static_cast<std::size_t>(order + 1));
  double factorial = 1.0;
  switch (fn.kind) {
    case ElementaryKind::exp: {
      const double e = std::exp(center);
      for (int k = 0; k <= order; ++k) {
        if (k > 0) factorial *= k;
        s[static_cast<std::size_t>(k)] = e / factorial;
      }
      break;
    }
    case ElementaryKind::sin:
    case ElementaryKind::cos: {
      // k-th derivative of sin is sin(x + k pi/2); cycle the four values exactly.
      const double sc = std::sin(center), cc = std::cos(center);
      const double cycle_sin[4] = {sc, cc, -sc, -cc};
      const double cycle_cos[4] = {cc, -sc, -cc, sc};
      const double* cycle = fn.kind == ElementaryKind::sin ? cycle_sin : cycle_cos;
      for (int k = 0; k <= order; ++k) {
        if (k > 0) factorial *= k;
        s[static_cast<std::size_t>(k)] = cycle[k % 4] / factorial;
      }
      break;
    }
    case ElementaryKind::log: {
      if (!(center > 0.0)) {
        throw DomainError("log: argument " + std::to_string(center) + " is not positive");
      }
      s[0] = std::log(center);
      double power = 1.0;
      for (int k = 1; k <= order; ++k) {
        power *= center;
        s[static_cast<std::size_t>(k)] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * power);
      }
      break;
    }
    case ElementaryKind::sqrt: {
      if (!(center > 0.0)) {
        throw DomainError("sqrt: argument " + std::to_string(center) + " is not positive");
      }
      const std::vector<double> c = binomials(0.5, order);
      const double root = std::sqrt(center);
      double power = 1.0;
      for (int k = 0; k <= order; ++k) {
        if (k > 0) power *= center;
        s[static_cast<std::size_t>(k)] = root * c[static_cast<std::size_t>(k)] / power;
      }
      break;
    }
    case ElementaryKind::pow_int: {
      const int n = fn.exponent;
      if (center == 0.0) {
        if (n < 0) throw DomainError("pow: negative exponent at zero");
        if (n <= order) s[static_cast<std::size_t>(n)] = 1.0;
        break;
      }
      const std::vector<double> c = binomials(n, order);
      for (int k = 0; k <= order; ++k) {
        const double ck = c[static_cast<std::size_t>(k)];
        s[static_cast<std::size_t>(k)] = ck == 0.0 ? 0.0 : ck * std::pow(center, n - k);
      }
      break;
    }
  }
  return s;
}

Jet2 elementary(Elementary fn, const Jet2& inner, double center) {
  const int n = inner.order();
  if (!inner.has_zero_constant()) {
    throw DomainError(std::string(name_of(fn.kind)) + ": inner jet must have zero constant term");
  }
  if (fn.kind == ElementaryKind::sqrt && center == 0.0) {
    // sqrt is not differentiable at 0; only the flat inner jet is representable.
    if (inner.max_abs() == 0.0) return Jet2(n);
    throw DomainError("sqrt: expansion at 0 with non-flat argument");
  }
  return compose(Jet1(n, elementary_series(fn, center, n)), inner);
}

}  // namespace crosscap
