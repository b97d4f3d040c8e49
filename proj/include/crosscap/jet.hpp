#pragma once

// Truncated Taylor expansions (jets) in one and two variables.
//
// Coefficients are Taylor coefficients, not derivative values: the bivariate
// jet stores c_{jk} with f(u,v) = sum c_{jk} u^j v^k, so f_vv(0,0) = 2 c_{02}.
// Every binary operation requires equal orders and truncates eagerly.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace crosscap {

/// Largest working order the toolkit supports.
inline constexpr int kMaxOrder = 12;

constexpr std::size_t jet2_size(int order) noexcept {
  return static_cast<std::size_t>((order + 1) * (order + 2) / 2);
}

/// Storage is grouped by total degree, so each homogeneous part is contiguous.
constexpr std::size_t jet2_index(int j, int k) noexcept {
  const int d = j + k;
  return static_cast<std::size_t>(d * (d + 1) / 2 + k);
}

/// Univariate jet: sum coeffs[k] t^k, k = 0..order.
class Jet1 {
 public:
  Jet1() : Jet1(0) {}
  explicit Jet1(int order);
  Jet1(int order, std::vector<double> coeffs);

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  double operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return coeffs_[static_cast<std::size_t>(k)]; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  double evaluate(double t) const noexcept;
  double max_abs() const noexcept;

  friend bool operator==(const Jet1&, const Jet1&) = default;

 private:
  std::vector<double> coeffs_;
};

Jet1 operator+(const Jet1& x, const Jet1& y);
Jet1 operator-(const Jet1& x, const Jet1& y);
Jet1 operator-(const Jet1& x);
Jet1 operator*(double s, const Jet1& x);
Jet1 operator*(const Jet1& x, const Jet1& y);
double max_abs_difference(const Jet1& x, const Jet1& y);

/// Bivariate jet: sum c_{jk} u^j v^k over j + k <= order.
class Jet2 {
 public:
  Jet2() : Jet2(0) {}
  explicit Jet2(int order);

  static Jet2 constant(int order, double value);
  static Jet2 variable_u(int order);
  static Jet2 variable_v(int order);
  static Jet2 monomial(int order, int j, int k, double coeff = 1.0);

  int order() const noexcept { return order_; }
  double operator()(int j, int k) const { return coeffs_[jet2_index(j, k)]; }
  double& operator()(int j, int k) { return coeffs_[jet2_index(j, k)]; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  /// Polynomial value of the truncated expansion.
  double evaluate(double u, double v) const noexcept;
  double max_abs() const noexcept;
  bool has_zero_constant() const noexcept { return coeffs_[0] == 0.0; }

  Jet2& operator+=(const Jet2& y);
  Jet2& operator-=(const Jet2& y);
  Jet2& operator*=(double s) noexcept;

  friend bool operator==(const Jet2&, const Jet2&) = default;

 private:
  int order_;
  std::vector<double> coeffs_;
};

Jet2 operator+(Jet2 x, const Jet2& y);
Jet2 operator-(Jet2 x, const Jet2& y);
Jet2 operator-(Jet2 x);
Jet2 operator*(double s, Jet2 x);
/// Truncated product (Cauchy convolution).
Jet2 operator*(const Jet2& x, const Jet2& y);

/// Coefficient-shift derivatives; the result has order max(order - 1, 0).
Jet2 partial_u(const Jet2& x);
Jet2 partial_v(const Jet2& x);
Jet2 truncate(const Jet2& x, int order);
/// Terms of total degree exactly `degree`, as a jet of the same order.
Jet2 homogeneous_part(const Jet2& x, int degree);
/// b(v) viewed as a function of (u, v).
Jet2 embed_v(const Jet1& b);
/// x(0, v).
Jet1 restrict_to_v_axis(const Jet2& x);
/// x(s u, t v), coefficientwise c_{jk} s^j t^k.
Jet2 scale_variables(const Jet2& x, double su, double sv);
Jet1 scale_variable(const Jet1& x, double s);

double max_abs_difference(const Jet2& x, const Jet2& y);

/// outer(inner_u, inner_v). Inner jets must have zero constant term.
Jet2 compose(const Jet2& outer, const Jet2& inner_u, const Jet2& inner_v);
/// outer(inner) for a univariate outer series.
Jet2 compose(const Jet1& outer, const Jet2& inner);

/// Germ of a map (R^2,0) -> (R^2,0), e.g. a source coordinate change.
struct PlaneJet {
  Jet2 u;
  Jet2 v;

  int order() const noexcept { return u.order(); }
  Eigen::Matrix2d linear_part() const;
  double evaluate_u(double s, double t) const noexcept { return u.evaluate(s, t); }
  double evaluate_v(double s, double t) const noexcept { return v.evaluate(s, t); }
  Eigen::Vector2d evaluate(double s, double t) const noexcept {
    return {u.evaluate(s, t), v.evaluate(s, t)};
  }
};

PlaneJet identity_plane_jet(int order);
PlaneJet linear_plane_jet(int order, const Eigen::Matrix2d& m);
/// outer o inner.
PlaneJet compose(const PlaneJet& outer, const PlaneJet& inner);
/// Inverse germ psi with phi o psi = id to the working order. Throws NotInvertible.
PlaneJet invert(const PlaneJet& phi);
double max_abs_difference(const PlaneJet& x, const PlaneJet& y);

/// Surface germ: three centered component jets plus the expansion point and its image.
class MapJet3 {
 public:
  MapJet3(std::array<Jet2, 3> components, Eigen::Vector2d base_point, Eigen::Vector3d base_value);

  int order() const noexcept { return components_[0].order(); }
  const Jet2& operator[](int i) const { return components_[static_cast<std::size_t>(i)]; }
  const std::array<Jet2, 3>& components() const noexcept { return components_; }
  const Eigen::Vector2d& base_point() const noexcept { return base_point_; }
  const Eigen::Vector3d& base_value() const noexcept { return base_value_; }

  /// Vector of the u^j v^k coefficients of the three components.
  Eigen::Vector3d coefficient(int j, int k) const;
  Eigen::Vector3d f_u() const { return coefficient(1, 0); }
  Eigen::Vector3d f_v() const { return coefficient(0, 1); }
  Eigen::Vector3d f_uu() const { return 2.0 * coefficient(2, 0); }
  Eigen::Vector3d f_uv() const { return coefficient(1, 1); }
  Eigen::Vector3d f_vv() const { return 2.0 * coefficient(0, 2); }

  /// Full (uncentered) value of the truncated expansion at offset (s, t) from the base point.
  Eigen::Vector3d evaluate(double s, double t) const noexcept;
  double max_abs() const noexcept;

 private:
  std::array<Jet2, 3> components_;
  Eigen::Vector2d base_point_;
  Eigen::Vector3d base_value_;
};

/// f o phi; phi is expressed in offsets from the base point, which is kept.
MapJet3 compose(const MapJet3& f, const PlaneJet& phi);
/// rotation * f + translation.
MapJet3 apply_motion(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation,
                     const MapJet3& f);
MapJet3 truncate(const MapJet3& f, int order);
double max_abs_difference(const MapJet3& x, const MapJet3& y);

// Elementary functions in Taylor mode.

enum class ElementaryKind { sin, cos, exp, log, sqrt, pow_int };

struct Elementary {
  ElementaryKind kind;
  int exponent = 0;  // pow_int only
};

/// Taylor coefficients of fn at `center`, degrees 0..order. Throws DomainError.
std::vector<double> elementary_series(Elementary fn, double center, int order);

/// fn(center + inner), truncated. `inner` must have zero constant term.
Jet2 elementary(Elementary fn, const Jet2& inner, double center);

}  // namespace crosscap
