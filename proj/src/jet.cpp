#include "crosscap/jet.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "crosscap/error.hpp"

namespace crosscap {
namespace {

void check_order(int order) {
  if (order < 0 || order > kMaxOrder) {
    throw ContractViolation("jet order must lie in [0, 12], got " + std::to_string(order));
  }
}

void check_same_order(int a, int b, const char* op) {
  if (a != b) {
    throw ContractViolation(std::string(op) + ": order mismatch (" + std::to_string(a) + " vs " +
                            std::to_string(b) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Jet1

Jet1::Jet1(int order) {
  check_order(order);
  coeffs_.assign(static_cast<std::size_t>(order + 1), 0.0);
}

Jet1::Jet1(int order, std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  check_order(order);
  if (coeffs_.size() != static_cast<std::size_t>(order + 1)) {
    throw ContractViolation("Jet1: expected " + std::to_string(order + 1) + " coefficients, got " +
                            std::to_string(coeffs_.size()));
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw ContractViolation("Jet1: non-finite coefficient");
  }
}

double Jet1::evaluate(double t) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double Jet1::max_abs() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Jet1 operator+(const Jet1& x, const Jet1& y) {
  check_same_order(x.order(), y.order(), "Jet1 add");
  Jet1 r(x.order());
  for (int k = 0; k <= x.order(); ++k) r[k] = x[k] + y[k];
  return r;
}

Jet1 operator-(const Jet1& x, const Jet1& y) { return x + (-y); }

Jet1 operator-(const Jet1& x) { return -1.0 * x; }

Jet1 operator*(double s, const Jet1& x) {
  Jet1 r(x.order());
  for (int k = 0; k <= x.order(); ++k) r[k] = s * x[k];
  return r;
}

Jet1 operator*(const Jet1& x, const Jet1& y) {
  check_same_order(x.order(), y.order(), "Jet1 mul");
  const int n = x.order();
  Jet1 r(n);
  for (int i = 0; i <= n; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; i + j <= n; ++j) r[i + j] += x[i] * y[j];
  }
  return r;
}

double max_abs_difference(const Jet1& x, const Jet1& y) {
  check_same_order(x.order(), y.order(), "Jet1 difference");
  double m = 0.0;
  for (int k = 0; k <= x.order(); ++k) m = std::max(m, std::abs(x[k] - y[k]));
  return m;
}

// ---------------------------------------------------------------------------
// Jet2

Jet2::Jet2(int order) : order_(order) {
  check_order(order);
  coeffs_.assign(jet2_size(order), 0.0);
}

Jet2 Jet2::constant(int order, double value) {
  Jet2 r(order);
  r(0, 0) = value;
  return r;
}

Jet2 Jet2::variable_u(int order) { return monomial(order, 1, 0); }

Jet2 Jet2::variable_v(int order) { return monomial(order, 0, 1); }

Jet2 Jet2::monomial(int order, int j, int k, double coeff) {
  Jet2 r(order);
  if (j < 0 || k < 0) throw ContractViolation("Jet2::monomial: negative exponent");
  if (j + k <= order) r(j, k) = coeff;
  return r;
}

double Jet2::evaluate(double u, double v) const noexcept {
  // Horner in v for each power of u, then Horner in u.
  double acc = 0.0;
  for (int j = order_; j >= 0; --j) {
    double row = 0.0;
    for (int k = order_ - j; k >= 0; --k) row = row * v + (*this)(j, k);
    acc = acc * u + row;
  }
  return acc;
}

double Jet2::max_abs() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Jet2& Jet2::operator+=(const Jet2& y) {
  check_same_order(order_, y.order_, "Jet2 add");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += y.coeffs_[i];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& y) {
  check_same_order(order_, y.order_, "Jet2 sub");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= y.coeffs_[i];
  return *this;
}

Jet2& Jet2::operator*=(double s) noexcept {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Jet2 operator+(Jet2 x, const Jet2& y) { return x += y; }
Jet2 operator-(Jet2 x, const Jet2& y) { return x -= y; }
Jet2 operator-(Jet2 x) { return x *= -1.0; }
Jet2 operator*(double s, Jet2 x) { return x *= s; }

Jet2 operator*(const Jet2& x, const Jet2& y) {
  check_same_order(x.order(), y.order(), "Jet2 mul");
  const int n = x.order();
  Jet2 r(n);
  for (int dx = 0; dx <= n; ++dx) {
    for (int jx = 0; jx <= dx; ++jx) {
      const double cx = x(jx, dx - jx);
      if (cx == 0.0) continue;
      for (int dy = 0; dx + dy <= n; ++dy) {
        for (int jy = 0; jy <= dy; ++jy) {
          r(jx + jy, dx - jx + dy - jy) += cx * y(jy, dy - jy);
        }
      }
    }
  }
  return r;
}

Jet2 partial_u(const Jet2& x) {
  const int n = x.order();
  Jet2 r(std::max(n - 1, 0));
  for (int j = 1; j <= n; ++j)
    for (int k = 0; j + k <= n; ++k) r(j - 1, k) = j * x(j, k);
  return r;
}

Jet2 partial_v(const Jet2& x) {
  const int n = x.order();
  Jet2 r(std::max(n - 1, 0));
  for (int j = 0; j <= n; ++j)
    for (int k = 1; j + k <= n; ++k) r(j, k - 1) = k * x(j, k);
  return r;
}

Jet2 truncate(const Jet2& x, int order) {
  check_order(order);
  Jet2 r(order);
  const int n = std::min(order, x.order());
  for (int d = 0; d <= n; ++d)
    for (int j = 0; j <= d; ++j) r(j, d - j) = x(j, d - j);
  return r;
}

Jet2 homogeneous_part(const Jet2& x, int degree) {
  Jet2 r(x.order());
  if (degree < 0 || degree > x.order()) return r;
  for (int j = 0; j <= degree; ++j) r(j, degree - j) = x(j, degree - j);
  return r;
}

Jet2 embed_v(const Jet1& b) {
  Jet2 r(b.order());
  for (int k = 0; k <= b.order(); ++k) r(0, k) = b[k];
  return r;
}

Jet1 restrict_to_v_axis(const Jet2& x) {
  Jet1 r(x.order());
  for (int k = 0; k <= x.order(); ++k) r[k] = x(0, k);
  return r;
}

Jet2 scale_variables(const Jet2& x, double su, double sv) {
  const int n = x.order();
  Jet2 r(n);
  for (int j = 0; j <= n; ++j)
    for (int k = 0; j + k <= n; ++k) r(j, k) = x(j, k) * std::pow(su, j) * std::pow(sv, k);
  return r;
}

Jet1 scale_variable(const Jet1& x, double s) {
  Jet1 r(x.order());
  for (int k = 0; k <= x.order(); ++k) r[k] = x[k] * std::pow(s, k);
  return r;
}

double max_abs_difference(const Jet2& x, const Jet2& y) {
  check_same_order(x.order(), y.order(), "Jet2 difference");
  double m = 0.0;
  for (std::size_t i = 0; i < x.coeffs().size(); ++i)
    m = std::max(m, std::abs(x.coeffs()[i] - y.coeffs()[i]));
  return m;
}

Jet2 compose(const Jet2& outer, const Jet2& inner_u, const Jet2& inner_v) {
  const int n = outer.order();
  check_same_order(n, inner_u.order(), "compose");
  check_same_order(n, inner_v.order(), "compose");
  if (!inner_u.has_zero_constant() || !inner_v.has_zero_constant()) {
    throw DomainError("compose: inner jets must have zero constant term");
  }
  // Powers of inner_v, then sum_j inner_u^j * (sum_k c_jk inner_v^k).
  std::vector<Jet2> v_pow;
  v_pow.reserve(static_cast<std::size_t>(n + 1));
  v_pow.push_back(Jet2::constant(n, 1.0));
  for (int k = 1; k <= n; ++k) v_pow.push_back(v_pow.back() * inner_v);

  Jet2 result(n);
  Jet2 u_pow = Jet2::constant(n, 1.0);
  for (int j = 0; j <= n; ++j) {
    Jet2 row(n);
    bool any = false;
    for (int k = 0; j + k <= n; ++k) {
      const double c = outer(j, k);
      if (c == 0.0) continue;
      row += c * v_pow[static_cast<std::size_t>(k)];
      any = true;
    }
    if (any) result += (j == 0 ? row : u_pow * row);
    if (j < n) u_pow = u_pow * inner_u;
  }
  return result;
}

Jet2 compose(const Jet1& outer, const Jet2& inner) {
  const int n = outer.order();
  check_same_order(n, inner.order(), "compose");
  if (!inner.has_zero_constant()) {
    throw DomainError("compose: inner jet must have zero constant term");
  }
  // Horner: (((c_n h + c_{n-1}) h + ...) h + c_0).
  Jet2 acc(n);
  for (int k = n; k >= 0; --k) {
    acc = acc * inner;
    acc(0, 0) += outer[k];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// PlaneJet

Eigen::Matrix2d PlaneJet::linear_part() const {
  Eigen::Matrix2d m;
  m << u(1, 0), u(0, 1), v(1, 0), v(0, 1);
  return m;
}

PlaneJet identity_plane_jet(int order) {
  return {Jet2::variable_u(order), Jet2::variable_v(order)};
}

PlaneJet linear_plane_jet(int order, const Eigen::Matrix2d& m) {
  PlaneJet r{Jet2(order), Jet2(order)};
  if (order >= 1) {
    r.u(1, 0) = m(0, 0);
    r.u(0, 1) = m(0, 1);
    r.v(1, 0) = m(1, 0);
    r.v(0, 1) = m(1, 1);
  }
  return r;
}

PlaneJet compose(const PlaneJet& outer, const PlaneJet& inner) {
  return {compose(outer.u, inner.u, inner.v), compose(outer.v, inner.u, inner.v)};
}

PlaneJet invert(const PlaneJet& phi) {
  const int n = phi.order();
  check_same_order(n, phi.v.order(), "invert");
  if (!phi.u.has_zero_constant() || !phi.v.has_zero_constant()) {
    throw DomainError("invert: jets must have zero constant term");
  }
  if (n == 0) return phi;
  const Eigen::Matrix2d lin = phi.linear_part();
  const double det = lin.determinant();
  const double scale = std::max(lin.cwiseAbs().maxCoeff(), 1e-300);
  if (!(std::abs(det) > 1e-14 * scale * scale)) {
    throw NotInvertible("invert: linear part is singular (det = " + std::to_string(det) + ")");
  }
  const Eigen::Matrix2d lin_inv = lin.inverse();

  // phi = L + N. Fixed point psi = L^{-1}(id - N(psi)); each sweep fixes one more degree.
  PlaneJet nonlinear = phi;
  for (Jet2* c : {&nonlinear.u, &nonlinear.v}) {
    (*c)(1, 0) = 0.0;
    (*c)(0, 1) = 0.0;
  }
  const auto apply_inverse = [&](const Jet2& a, const Jet2& b) {
    return PlaneJet{lin_inv(0, 0) * a + lin_inv(0, 1) * b, lin_inv(1, 0) * a + lin_inv(1, 1) * b};
  };
  const Jet2 id_u = Jet2::variable_u(n);
  const Jet2 id_v = Jet2::variable_v(n);
  PlaneJet psi = apply_inverse(id_u, id_v);
  for (int sweep = 1; sweep < n; ++sweep) {
    const PlaneJet correction = compose(nonlinear, psi);
    psi = apply_inverse(id_u - correction.u, id_v - correction.v);
  }
  return psi;
}

double max_abs_difference(const PlaneJet& x, const PlaneJet& y) {
  return std::max(max_abs_difference(x.u, y.u), max_abs_difference(x.v, y.v));
}

// ---------------------------------------------------------------------------
// MapJet3

MapJet3::MapJet3(std::array<Jet2, 3> components, Eigen::Vector2d base_point,
                 Eigen::Vector3d base_value)
    : components_(std::move(components)), base_point_(base_point), base_value_(base_value) {
  const int n = components_[0].order();
  for (int i = 1; i < 3; ++i) check_same_order(n, components_[static_cast<std::size_t>(i)].order(), "MapJet3");
  for (const Jet2& c : components_) {
    if (!c.has_zero_constant()) throw ContractViolation("MapJet3: components must be centered");
    for (double x : c.coeffs()) {
      if (!std::isfinite(x)) throw ContractViolation("MapJet3: non-finite coefficient");
    }
  }
  if (!base_point_.allFinite() || !base_value_.allFinite()) {
    throw ContractViolation("MapJet3: non-finite base point or value");
  }
}

Eigen::Vector3d MapJet3::coefficient(int j, int k) const {
  if (j + k > order()) return Eigen::Vector3d::Zero();
  return {components_[0](j, k), components_[1](j, k), components_[2](j, k)};
}

Eigen::Vector3d MapJet3::evaluate(double s, double t) const noexcept {
  return base_value_ + Eigen::Vector3d(components_[0].evaluate(s, t), components_[1].evaluate(s, t),
                                       components_[2].evaluate(s, t));
}

double MapJet3::max_abs() const noexcept {
  return std::max({components_[0].max_abs(), components_[1].max_abs(), components_[2].max_abs()});
}

MapJet3 compose(const MapJet3& f, const PlaneJet& phi) {
  return MapJet3({compose(f[0], phi.u, phi.v), compose(f[1], phi.u, phi.v), compose(f[2], phi.u, phi.v)},
                 f.base_point(), f.base_value());
}

MapJet3 apply_motion(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation,
                     const MapJet3& f) {
  std::array<Jet2, 3> out{Jet2(f.order()), Jet2(f.order()), Jet2(f.order())};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(i)] += rotation(i, j) * f[j];
  return MapJet3(std::move(out), f.base_point(), rotation * f.base_value() + translation);
}

MapJet3 truncate(const MapJet3& f, int order) {
  return MapJet3({truncate(f[0], order), truncate(f[1], order), truncate(f[2], order)}, f.base_point(),
                 f.base_value());
}

double max_abs_difference(const MapJet3& x, const MapJet3& y) {
  double m = (x.base_value() - y.base_value()).cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i) m = std::max(m, max_abs_difference(x[i], y[i]));
  return m;
}

}  // namespace crosscap
