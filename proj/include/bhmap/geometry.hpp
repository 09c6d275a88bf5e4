#pragma once

// Chart-level Riemannian geometry on truncated Taylor jets. A metric is a
// symmetric matrix of scalar fields evaluated directly on coordinate jets,
// so Christoffel symbols, curvature tensors and Laplacians come out of exact
// ring arithmetic — the only error anywhere is floating-point roundoff.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bhmap/jets.hpp"

namespace bhmap {

/// A scalar field as a jet program: receives the coordinate jets of a point
/// and returns the field's jet there. Works at any order; evaluating at a
/// bare point just means seeding order-0 jets.
using ScalarField = std::function<Jet(std::span<const Jet>)>;

ScalarField constant_field(double value);
ScalarField coordinate_field(int axis);

/// Riemannian metric on one chart: a dim x dim symmetric matrix of fields,
/// row-major. Evaluation reads the upper triangle and mirrors it, so the
/// stored lower triangle only needs to be present, not bit-identical.
struct MetricPatch {
  int dim = 0;
  std::vector<ScalarField> components;

  const ScalarField& component(int i, int j) const {
    return components[std::size_t(i) * dim + j];
  }
};

MetricPatch euclidean_metric(int dim);

/// g_ij = factor(x) * delta_ij.
MetricPatch conformal_metric(int dim, ScalarField factor);

MetricPatch diagonal_metric(std::vector<ScalarField> diagonal);

/// A map between charts, one jet program per target coordinate.
struct SmoothMap {
  int domain_dim = 0;
  int target_dim = 0;
  std::vector<ScalarField> components;

  std::vector<Jet> eval(std::span<const Jet> x) const;
  std::vector<double> value(std::span<const double> x) const;
};

SmoothMap identity_map(int dim);

/// Metric and its inverse evaluated as jets at one point.
struct MetricJets {
  int dim = 0;
  int order = 0;
  std::vector<Jet> g;
  std::vector<Jet> ginv;

  const Jet& lower(int i, int j) const { return g[std::size_t(i) * dim + j]; }
  const Jet& upper(int i, int j) const { return ginv[std::size_t(i) * dim + j]; }
};

/// Evaluate metric + inverse at the point described by coordinate jets.
/// Throws std::domain_error if the metric is not positive definite there.
MetricJets metric_jets(const MetricPatch& metric, std::span<const Jet> x);

/// Exact inverse of a jet-valued symmetric positive-definite matrix. Newton
/// iteration X <- X(2I - G X) seeded with the inverse of the constant part;
/// the error ideal squares each step, so three iterations close order 4.
std::vector<Jet> jet_matrix_inverse_spd(std::span<const Jet> G, int dim);

/// Christoffel symbols of the second kind as jets, one order below x.
/// Layout: result[(k*dim + i)*dim + j] = Gamma^k_ij.
std::vector<Jet> christoffel_jets(const MetricPatch& metric,
                                  std::span<const Jet> x);

/// Pointwise curvature. riemann[((r*dim + s)*dim + m)*dim + n] = R^r_smn in
/// the convention R(e_m, e_n) e_s = R^r_smn e_r; ricci is the (r, m) trace,
/// which makes round spheres positively curved.
struct CurvatureValues {
  int dim = 0;
  std::vector<double> riemann;
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
};

CurvatureValues curvature(const MetricPatch& metric, std::span<const double> x);

Eigen::MatrixXd metric_value(const MetricPatch& metric,
                             std::span<const double> x);

/// Laplace-Beltrami operator, divergence-of-gradient sign (so on flat space
/// laplacian of -|x|^2 is -2 dim). Returns a jet of order f.order() - 2.
Jet laplacian(const MetricPatch& metric, std::span<const Jet> x, const Jet& f);

/// Gradient (index-raised differential), dim jets of order f.order() - 1.
std::vector<Jet> gradient(const MetricPatch& metric, std::span<const Jet> x,
                          const Jet& f);

/// Divergence of a one-form: g^ij (d_i w_j - Gamma^k_ij w_k), order - 1.
Jet divergence_oneform(const MetricPatch& metric, std::span<const Jet> x,
                       std::span<const Jet> omega);

/// Trace of the second covariant derivative of a vector field,
/// g^ij (nabla_i nabla_j X)^a, componentwise jets of order X.order() - 2.
/// Same sign family as `laplacian`: on flat space it is the componentwise
/// Laplace operator.
std::vector<Jet> vector_laplacian(const MetricPatch& metric,
                                  std::span<const Jet> x,
                                  std::span<const Jet> X);

}  // namespace bhmap
