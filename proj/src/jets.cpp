#include "bhmap/jets.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace bhmap {

namespace {

// Shared combinatorial tables for one ambient dimension: the graded-lex
// monomial list up to order 4, exponent->position lookup, and the sparse
// convolution structure of the truncated product. Built once per dimension.
struct Basis {
  int dim = 0;
  std::vector<MultiIndex> monomials;          // graded-lex
  std::vector<int> count_by_order;            // jet_coeff_count(dim, k), k=0..4
  std::unordered_map<std::uint64_t, int> position;

  struct Triple {
    std::uint16_t a, b, out;
  };
  // Product pairs (a, b, a+b) sorted by the total degree of a+b, with
  // offsets[k] the end of the block whose results have degree <= k. A
  // multiplication truncated at order k only walks that prefix.
  std::vector<Triple> product;
  std::vector<std::size_t> product_offsets;  // size kMaxJetOrder + 2
};

std::uint64_t pack_exponents(const MultiIndex& a) {
  std::uint64_t key = 0;
  for (int i = 0; i < a.dim; ++i) key |= std::uint64_t(a.e[i]) << (4 * i);
  return key;
}

void enumerate_degree(int dim, int degree, int axis, MultiIndex& scratch,
                      std::vector<MultiIndex>& out) {
  if (axis == dim - 1) {
    scratch.e[axis] = std::uint8_t(degree);
    out.push_back(scratch);
    return;
  }
  for (int k = degree; k >= 0; --k) {
    scratch.e[axis] = std::uint8_t(k);
    enumerate_degree(dim, degree - k, axis + 1, scratch, out);
  }
}

Basis build_basis(int dim) {
  Basis basis;
  basis.dim = dim;
  basis.count_by_order.resize(kMaxJetOrder + 1);
  for (int degree = 0; degree <= kMaxJetOrder; ++degree) {
    MultiIndex scratch;
    scratch.dim = dim;
    enumerate_degree(dim, degree, 0, scratch, basis.monomials);
    basis.count_by_order[degree] = int(basis.monomials.size());
  }
  basis.position.reserve(basis.monomials.size() * 2);
  for (int i = 0; i < int(basis.monomials.size()); ++i) {
    basis.position.emplace(pack_exponents(basis.monomials[i]), i);
  }

  const int total = int(basis.monomials.size());
  for (int a = 0; a < total; ++a) {
    for (int b = 0; b < total; ++b) {
      const MultiIndex& ma = basis.monomials[a];
      const MultiIndex& mb = basis.monomials[b];
      if (ma.order() + mb.order() > kMaxJetOrder) continue;
      MultiIndex sum;
      sum.dim = dim;
      for (int i = 0; i < dim; ++i) sum.e[i] = std::uint8_t(ma.e[i] + mb.e[i]);
      const int out = basis.position.at(pack_exponents(sum));
      basis.product.push_back({std::uint16_t(a), std::uint16_t(b), std::uint16_t(out)});
    }
  }
  std::stable_sort(basis.product.begin(), basis.product.end(),
                   [&](const Basis::Triple& lhs, const Basis::Triple& rhs) {
                     return basis.monomials[lhs.out].order() <
                            basis.monomials[rhs.out].order();
                   });
  basis.product_offsets.assign(kMaxJetOrder + 2, 0);
  for (std::size_t i = 0; i < basis.product.size(); ++i) {
    const int deg = basis.monomials[basis.product[i].out].order();
    basis.product_offsets[deg + 1] = i + 1;
  }
  for (int k = 1; k <= kMaxJetOrder + 1; ++k) {
    basis.product_offsets[k] =
        std::max(basis.product_offsets[k], basis.product_offsets[k - 1]);
  }
  return basis;
}

const Basis& basis_for(int dim) {
  if (dim < 1 || dim > kMaxJetDim) {
    throw std::invalid_argument("jet dimension must be in [1, 8], got " +
                                std::to_string(dim));
  }
  static std::array<Basis, kMaxJetDim> cache;
  static std::array<std::once_flag, kMaxJetDim> flags;
  std::call_once(flags[dim - 1], [dim] { cache[dim - 1] = build_basis(dim); });
  return cache[dim - 1];
}

void check_order(int order) {
  if (order < 0 || order > kMaxJetOrder) {
    throw std::invalid_argument("jet order must be in [0, 4], got " +
                                std::to_string(order));
  }
}

void check_same_shape(const Jet& a, const Jet& b) {
  if (a.dim() != b.dim() || a.order() != b.order()) {
    throw std::invalid_argument(
        "jet shape mismatch: (" + std::to_string(a.dim()) + ", order " +
        std::to_string(a.order()) + ") vs (" + std::to_string(b.dim()) +
        ", order " + std::to_string(b.order()) + ")");
  }
}

// Evaluate sum_k coeff[k] * u^k with u the nilpotent part of a (Horner).
// This is the engine behind every elementary function: coeff[k] is the k-th
// Taylor coefficient f^(k)(a0)/k! of the univariate function at the constant
// term, and u^(order+1) = 0 in the truncated ring makes the composite exact.
Jet compose_univariate(const Jet& a, std::span<const double> coeff) {
  Jet u = a;
  u -= a.value();
  Jet result(a.dim(), a.order(), coeff[a.order()]);
  for (int k = a.order() - 1; k >= 0; --k) {
    result = result * u + coeff[k];
  }
  return result;
}

}  // namespace

MultiIndex::MultiIndex(int dim_in, std::initializer_list<int> exponents)
    : MultiIndex(dim_in, std::span<const int>(exponents.begin(), exponents.size())) {}

MultiIndex::MultiIndex(int dim_in, std::span<const int> exponents) : dim(dim_in) {
  if (dim < 1 || dim > kMaxJetDim) {
    throw std::invalid_argument("multi-index dimension must be in [1, 8]");
  }
  if (int(exponents.size()) != dim) {
    throw std::invalid_argument("multi-index needs exactly dim exponents");
  }
  int total = 0;
  for (int i = 0; i < dim; ++i) {
    if (exponents[i] < 0) {
      throw std::invalid_argument("multi-index exponents must be nonnegative");
    }
    total += exponents[i];
    e[i] = std::uint8_t(exponents[i]);
  }
  if (total > kMaxJetOrder) {
    throw std::invalid_argument("multi-index order exceeds 4");
  }
}

MultiIndex MultiIndex::unit(int dim, int axis) {
  if (dim < 1 || dim > kMaxJetDim || axis < 0 || axis >= dim) {
    throw std::invalid_argument("bad axis for multi-index");
  }
  MultiIndex a;
  a.dim = dim;
  a.e[axis] = 1;
  return a;
}

int MultiIndex::order() const {
  int total = 0;
  for (int i = 0; i < dim; ++i) total += e[i];
  return total;
}

double MultiIndex::factorial() const {
  static constexpr double kFact[5] = {1.0, 1.0, 2.0, 6.0, 24.0};
  double f = 1.0;
  for (int i = 0; i < dim; ++i) f *= kFact[e[i]];
  return f;
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& a) {
  os << '(';
  for (int i = 0; i < a.dim; ++i) {
    if (i) os << ',';
    os << int(a.e[i]);
  }
  return os << ')';
}

int jet_coeff_count(int dim, int order) {
  check_order(order);
  return basis_for(dim).count_by_order[order];
}

int jet_coeff_index(const MultiIndex& a) {
  const Basis& basis = basis_for(a.dim);
  const auto it = basis.position.find(pack_exponents(a));
  if (it == basis.position.end()) {
    throw std::invalid_argument("multi-index outside order-4 table");
  }
  return it->second;
}

const MultiIndex& jet_coeff_multi_index(int dim, int position) {
  const Basis& basis = basis_for(dim);
  if (position < 0 || position >= int(basis.monomials.size())) {
    throw std::out_of_range("jet coefficient position out of range");
  }
  return basis.monomials[position];
}

Jet::Jet(int dim, int order, double value) : dim_(dim), order_(order) {
  check_order(order);
  c_.assign(jet_coeff_count(dim, order), 0.0);
  c_[0] = value;
}

Jet Jet::variable(int dim, int order, int axis, double value) {
  Jet jet(dim, order, value);
  if (axis < 0 || axis >= dim) {
    throw std::invalid_argument("variable axis out of range");
  }
  if (order >= 1) {
    jet.c_[jet_coeff_index(MultiIndex::unit(dim, axis))] = 1.0;
  }
  return jet;
}

double Jet::coeff(const MultiIndex& a) const {
  if (a.dim != dim_) throw std::invalid_argument("multi-index dim mismatch");
  if (a.order() > order_) return 0.0;
  return c_[jet_coeff_index(a)];
}

double Jet::partial(const MultiIndex& a) const {
  return coeff(a) * a.factorial();
}

Jet Jet::truncated(int order) const {
  check_order(order);
  if (order > order_) {
    throw std::invalid_argument("cannot truncate a jet to a higher order");
  }
  Jet out(dim_, order, 0.0);
  std::copy(c_.begin(), c_.begin() + out.c_.size(), out.c_.begin());
  return out;
}

Jet Jet::derivative(int axis) const {
  if (axis < 0 || axis >= dim_) {
    throw std::invalid_argument("derivative axis out of range");
  }
  if (order_ == 0) {
    throw std::invalid_argument("cannot differentiate an order-0 jet");
  }
  const Basis& basis = basis_for(dim_);
  Jet out(dim_, order_ - 1, 0.0);
  // Taylor coefficient of d_axis f at beta is (beta_axis + 1) * c[beta + e_axis].
  for (int pos = 0; pos < int(out.c_.size()); ++pos) {
    MultiIndex shifted = basis.monomials[pos];
    shifted.e[axis] += 1;
    out.c_[pos] =
        double(shifted.e[axis]) * c_[basis.position.at(pack_exponents(shifted))];
  }
  return out;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (double& v : out.c_) v = -v;
  return out;
}

Jet& Jet::operator+=(const Jet& rhs) {
  check_same_shape(*this, rhs);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  check_same_shape(*this, rhs);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
  return *this;
}

Jet& Jet::operator+=(double rhs) {
  if (c_.empty()) throw std::invalid_argument("operation on an empty jet");
  c_[0] += rhs;
  return *this;
}

Jet& Jet::operator-=(double rhs) { return *this += -rhs; }

Jet& Jet::operator*=(double rhs) {
  for (double& v : c_) v *= rhs;
  return *this;
}

Jet& Jet::operator/=(double rhs) { return *this *= 1.0 / rhs; }

Jet operator-(double a, const Jet& b) {
  Jet out = -b;
  out += a;
  return out;
}

Jet operator/(double a, const Jet& b) { return jet_reciprocal(b) * a; }

Jet operator*(const Jet& a, const Jet& b) {
  check_same_shape(a, b);
  const Basis& basis = basis_for(a.dim());
  Jet out(a.dim(), a.order(), 0.0);
  const std::size_t end = basis.product_offsets[a.order() + 1];
  for (std::size_t i = 0; i < end; ++i) {
    const Basis::Triple& t = basis.product[i];
    if (t.a >= a.c_.size() || t.b >= b.c_.size()) continue;
    out.c_[t.out] += a.c_[t.a] * b.c_[t.b];
  }
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * jet_reciprocal(b); }

Jet jet_reciprocal(const Jet& a) {
  const double a0 = a.value();
  if (a0 == 0.0) {
    throw std::domain_error("jet reciprocal: constant term is zero");
  }
  if (a.order() == 0) return Jet(a.dim(), 0, 1.0 / a0);
  // Seed x0 = (2 - a/a0)/a0 matches 1/a through first order, so the Newton
  // error e_k = (1 - a*x_k) starts in m^2 and squares each step: two
  // iterations land in m^8 = 0 at truncation order <= 4.
  Jet x = (2.0 - a / a0) * (1.0 / a0);
  for (int iter = 0; iter < 2; ++iter) {
    x = x * (2.0 - a * x);
  }
  return x;
}

Jet exp(const Jet& a) {
  const double v = std::exp(a.value());
  std::array<double, kMaxJetOrder + 1> coeff{};
  double kfact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) kfact *= k;
    coeff[k] = v / kfact;
  }
  return compose_univariate(a, std::span<const double>(coeff.data(), a.order() + 1));
}

Jet log(const Jet& a) {
  const double a0 = a.value();
  if (a0 <= 0.0) {
    throw std::domain_error("jet log: constant term must be positive");
  }
  // log(a0 + u) = log a0 + u/a0 - u^2/(2 a0^2) + ...
  std::array<double, kMaxJetOrder + 1> coeff{};
  coeff[0] = std::log(a0);
  double p = 1.0;
  for (int k = 1; k <= a.order(); ++k) {
    p /= a0;
    coeff[k] = (k % 2 ? p : -p) / k;
  }
  return compose_univariate(a, std::span<const double>(coeff.data(), a.order() + 1));
}

Jet sqrt(const Jet& a) {
  const double a0 = a.value();
  if (a0 <= 0.0) {
    throw std::domain_error("jet sqrt: constant term must be positive");
  }
  return pow(a, 0.5);
}

Jet pow(const Jet& a, double r) {
  const double a0 = a.value();
  if (a0 <= 0.0) {
    throw std::domain_error("jet pow: constant term must be positive");
  }
  // Binomial series: coeff[k] = r(r-1)...(r-k+1)/k! * a0^(r-k).
  std::array<double, kMaxJetOrder + 1> coeff{};
  coeff[0] = std::pow(a0, r);
  double falling = 1.0;
  double kfact = 1.0;
  for (int k = 1; k <= a.order(); ++k) {
    falling *= (r - k + 1);
    kfact *= k;
    coeff[k] = falling / kfact * std::pow(a0, r - k);
  }
  return compose_univariate(a, std::span<const double>(coeff.data(), a.order() + 1));
}

Jet jet_compose(const Jet& F, std::span<const Jet> args) {
  const int n = F.dim();
  if (int(args.size()) != n) {
    throw std::invalid_argument("jet_compose: argument count must equal F.dim()");
  }
  const int order = F.order();
  const int ambient = args.empty() ? 0 : args[0].dim();
  for (const Jet& arg : args) {
    if (arg.dim() != ambient || arg.order() != order) {
      throw std::invalid_argument("jet_compose: all args need equal dim and F's order");
    }
  }
  // Powers of the nilpotent parts; u^(order+1) vanishes so degree > order
  // monomials of F contribute nothing (they are absent anyway).
  std::vector<std::array<Jet, kMaxJetOrder + 1>> powers(n);
  for (int i = 0; i < n; ++i) {
    Jet u = args[i];
    u -= args[i].value();
    powers[i][0] = Jet(ambient, order, 1.0);
    for (int p = 1; p <= order; ++p) powers[i][p] = powers[i][p - 1] * u;
  }
  Jet result(ambient, order, 0.0);
  const int terms = jet_coeff_count(n, order);
  for (int pos = 0; pos < terms; ++pos) {
    const double c = F.coeff_at(pos);
    if (c == 0.0) continue;
    const MultiIndex& beta = jet_coeff_multi_index(n, pos);
    Jet term(ambient, order, c);
    for (int i = 0; i < n; ++i) {
      if (beta.e[i]) term = term * powers[i][beta.e[i]];
    }
    result += term;
  }
  return result;
}

std::ostream& operator<<(std::ostream& os, const Jet& jet) {
  os << "jet[dim=" << jet.dim() << ",order=" << jet.order() << "](";
  for (int i = 0; i < int(jet.coeffs().size()); ++i) {
    if (i) os << ", ";
    os << jet.coeffs()[i];
  }
  return os << ')';
}

std::vector<Jet> seed_point(std::span<const double> x, int order) {
  std::vector<Jet> vars;
  vars.reserve(x.size());
  for (int i = 0; i < int(x.size()); ++i) {
    vars.push_back(Jet::variable(int(x.size()), order, i, x[i]));
  }
  return vars;
}

namespace {

double nested_central(const std::function<double(std::span<const double>)>& f,
                      std::vector<double>& x, const MultiIndex& alpha,
                      double h) {
  int axis = -1;
  for (int i = 0; i < alpha.dim; ++i) {
    if (alpha.e[i] > 0) {
      axis = i;
      break;
    }
  }
  if (axis < 0) return f(x);
  MultiIndex reduced = alpha;
  reduced.e[axis] -= 1;
  const double saved = x[axis];
  x[axis] = saved + h;
  const double above = nested_central(f, x, reduced, h);
  x[axis] = saved - h;
  const double below = nested_central(f, x, reduced, h);
  x[axis] = saved;
  return (above - below) / (2.0 * h);
}

}  // namespace

double fd_oracle(const std::function<double(std::span<const double>)>& f,
                 std::span<const double> x0, const MultiIndex& alpha,
                 double step) {
  if (int(x0.size()) != alpha.dim) {
    throw std::invalid_argument("fd_oracle: point dim must match multi-index");
  }
  if (step <= 0.0) {
    throw std::invalid_argument("fd_oracle: step must be positive");
  }
  std::vector<double> x(x0.begin(), x0.end());
  const double coarse = nested_central(f, x, alpha, step);
  const double fine = nested_central(f, x, alpha, step / 2.0);
  // Both estimates carry O(h^2) truncation error; one Richardson pass
  // cancels it, leaving O(h^4).
  return (4.0 * fine - coarse) / 3.0;
}

double fd_default_step(int derivative_order) {
  // Orders 3-4 need a step small enough that the h^4 term left after one
  // Richardson pass stays below the audit tolerances even for functions
  // whose derivatives grow by ~2x per order; 1e-2 keeps that truncation
  // error near 1e-5 while the roundoff floor (eps/h^4) stays near 1e-8.
  return derivative_order <= 2 ? 1e-3 : 1e-2;
}

}  // namespace bhmap
