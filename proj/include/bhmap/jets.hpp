#pragma once

// Truncated multivariate Taylor arithmetic ("jets"): every value carries its
// partial derivatives up to a fixed order (<= 4) in up to 8 variables.
// Arithmetic on jets is exact on the truncated polynomial ring
// R[x]/m^(order+1), so derivative propagation through long pipelines has no
// step-size error; the only noise is floating-point roundoff.
//
// Coefficients are Taylor coefficients (partial derivative / alpha!) stored
// densely in graded lexicographic order: all monomials of total degree 0,
// then 1, ... so a lower-order jet's layout is a prefix of a higher-order
// one's.

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

namespace bhmap {

inline constexpr int kMaxJetDim = 8;
inline constexpr int kMaxJetOrder = 4;

/// Monomial exponent tuple with |alpha| <= kMaxJetOrder.
struct MultiIndex {
  int dim = 0;
  std::array<std::uint8_t, kMaxJetDim> e{};

  MultiIndex() = default;
  MultiIndex(int dim, std::initializer_list<int> exponents);
  MultiIndex(int dim, std::span<const int> exponents);

  /// alpha = e_axis (single first-order derivative along one axis).
  static MultiIndex unit(int dim, int axis);

  int order() const;
  /// alpha! = prod(e_i!). Exact in double for order <= 4.
  double factorial() const;

  bool operator==(const MultiIndex& rhs) const = default;
};

std::ostream& operator<<(std::ostream& os, const MultiIndex& a);

/// Number of coefficients of a jet: C(dim + order, order).
int jet_coeff_count(int dim, int order);

/// Position of a multi-index in the graded-lex coefficient layout.
int jet_coeff_index(const MultiIndex& a);

/// The multi-index stored at a given coefficient position.
const MultiIndex& jet_coeff_multi_index(int dim, int position);

class Jet {
 public:
  Jet() = default;

  /// Constant jet (all derivative coefficients zero).
  Jet(int dim, int order, double value);

  /// Jet of the coordinate function x_axis at value: value + (x - x0)_axis.
  static Jet variable(int dim, int order, int axis, double value);

  int dim() const { return dim_; }
  int order() const { return order_; }

  double value() const { return c_.empty() ? 0.0 : c_[0]; }

  /// Taylor coefficient at a multi-index (alpha! not applied).
  double coeff(const MultiIndex& a) const;
  double coeff_at(int position) const { return c_[position]; }
  std::span<const double> coeffs() const { return c_; }

  /// Partial derivative d^alpha f at the base point = coeff * alpha!.
  double partial(const MultiIndex& a) const;

  /// Same jet truncated to a lower order.
  Jet truncated(int order) const;

  /// d/dx_axis as a jet of order (order-1): exact, no roundoff beyond the
  /// multiplications by integer factors.
  Jet derivative(int axis) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator+=(double rhs);
  Jet& operator-=(double rhs);
  Jet& operator*=(double rhs);
  Jet& operator/=(double rhs);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, const Jet& b);
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a /= b; }
  friend Jet operator/(double a, const Jet& b);

  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

 private:
  int dim_ = 0;
  int order_ = 0;
  std::vector<double> c_;

  friend Jet jet_reciprocal(const Jet& a);
};

/// 1 / a. Requires a nonzero constant term. Newton iteration on the
/// reciprocal: the seed already matches to first order, so two iterations
/// are exact at order 4 (error ideal power m^8 truncates to zero).
Jet jet_reciprocal(const Jet& a);

/// Elementary functions lifted to jets by composing the univariate Taylor
/// expansion with the nilpotent part (Horner evaluation; exact).
Jet exp(const Jet& a);
Jet log(const Jet& a);   // requires constant term > 0
Jet sqrt(const Jet& a);  // requires constant term > 0
Jet pow(const Jet& a, double r);  // requires constant term > 0

/// Substitute jets into a jet: F is an expansion in n variables around the
/// constant terms of args (n = F.dim()); each arg is a jet in the m ambient
/// variables. Returns F(args) as a jet in the ambient variables. All orders
/// must agree; the result is exact at that shared order.
Jet jet_compose(const Jet& F, std::span<const Jet> args);

std::ostream& operator<<(std::ostream& os, const Jet& jet);

/// Seed a full coordinate system: x[i] as variable jets at the given point.
std::vector<Jet> seed_point(std::span<const double> x, int order);

/// Independent derivative estimator used to audit the jet engine: nested
/// central differences for d^alpha f at x0 with one Richardson extrapolation
/// pass (leading h^2 error term eliminated).
double fd_oracle(const std::function<double(std::span<const double>)>& f,
                 std::span<const double> x0, const MultiIndex& alpha,
                 double step);

/// Step size giving near-optimal truncation/roundoff balance for fd_oracle.
double fd_default_step(int derivative_order);

}  // namespace bhmap
