#include "bhmap/geometry.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace bhmap {

namespace {

void check_point(int dim, std::span<const Jet> x, const char* who) {
  if (int(x.size()) != dim) {
    throw std::invalid_argument(std::string(who) +
                                ": coordinate jet count does not match chart "
                                "dimension");
  }
  for (const Jet& xi : x) {
    if (xi.dim() != dim) {
      throw std::invalid_argument(std::string(who) +
                                  ": coordinate jets must live in the chart's "
                                  "own variables");
    }
  }
}

std::vector<Jet> truncate_all(std::span<const Jet> v, int order) {
  std::vector<Jet> out;
  out.reserve(v.size());
  for (const Jet& j : v) out.push_back(j.order() == order ? j : j.truncated(order));
  return out;
}

// C = A * B for row-major n x n jet matrices of equal order.
std::vector<Jet> mat_mul(std::span<const Jet> A, std::span<const Jet> B, int n) {
  const int order = A[0].order();
  const int jet_dim = A[0].dim();
  std::vector<Jet> C(std::size_t(n) * n, Jet(jet_dim, order, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const Jet& a = A[std::size_t(i) * n + k];
      for (int j = 0; j < n; ++j) {
        C[std::size_t(i) * n + j] += a * B[std::size_t(k) * n + j];
      }
    }
  }
  return C;
}

}  // namespace

ScalarField constant_field(double value) {
  return [value](std::span<const Jet> x) {
    return Jet(x[0].dim(), x[0].order(), value);
  };
}

ScalarField coordinate_field(int axis) {
  return [axis](std::span<const Jet> x) {
    if (axis < 0 || axis >= int(x.size())) {
      throw std::invalid_argument("coordinate_field: axis out of range");
    }
    return x[axis];
  };
}

MetricPatch euclidean_metric(int dim) {
  MetricPatch metric;
  metric.dim = dim;
  metric.components.reserve(std::size_t(dim) * dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      metric.components.push_back(constant_field(i == j ? 1.0 : 0.0));
    }
  }
  return metric;
}

MetricPatch conformal_metric(int dim, ScalarField factor) {
  MetricPatch metric;
  metric.dim = dim;
  metric.components.reserve(std::size_t(dim) * dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (i == j) {
        metric.components.push_back(factor);
      } else {
        metric.components.push_back(constant_field(0.0));
      }
    }
  }
  return metric;
}

MetricPatch diagonal_metric(std::vector<ScalarField> diagonal) {
  MetricPatch metric;
  metric.dim = int(diagonal.size());
  metric.components.reserve(std::size_t(metric.dim) * metric.dim);
  for (int i = 0; i < metric.dim; ++i) {
    for (int j = 0; j < metric.dim; ++j) {
      if (i == j) {
        metric.components.push_back(diagonal[i]);
      } else {
        metric.components.push_back(constant_field(0.0));
      }
    }
  }
  return metric;
}

std::vector<Jet> SmoothMap::eval(std::span<const Jet> x) const {
  check_point(domain_dim, x, "SmoothMap::eval");
  std::vector<Jet> out;
  out.reserve(components.size());
  for (const ScalarField& f : components) out.push_back(f(x));
  return out;
}

std::vector<double> SmoothMap::value(std::span<const double> x) const {
  const auto jets = eval(seed_point(x, 0));
  std::vector<double> out;
  out.reserve(jets.size());
  for (const Jet& j : jets) out.push_back(j.value());
  return out;
}

SmoothMap identity_map(int dim) {
  SmoothMap map;
  map.domain_dim = dim;
  map.target_dim = dim;
  for (int i = 0; i < dim; ++i) map.components.push_back(coordinate_field(i));
  return map;
}

std::vector<Jet> jet_matrix_inverse_spd(std::span<const Jet> G, int dim) {
  const int order = G[0].order();
  const int jet_dim = G[0].dim();

  Eigen::MatrixXd g0(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g0(i, j) = G[std::size_t(i) * dim + j].value();
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(g0);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error(
        "matrix inverse: constant part is not symmetric positive definite");
  }
  const Eigen::MatrixXd x0 = llt.solve(Eigen::MatrixXd::Identity(dim, dim));

  std::vector<Jet> X(std::size_t(dim) * dim, Jet(jet_dim, order, 0.0));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      X[std::size_t(i) * dim + j] = Jet(jet_dim, order, x0(i, j));
    }
  }
  if (order == 0) return X;

  // X <- X (2I - G X); the residual I - GX starts with no constant part, so
  // it squares away: three iterations are exact for order <= 4.
  for (int iter = 0; iter < 3; ++iter) {
    std::vector<Jet> GX = mat_mul(G, X, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        Jet& e = GX[std::size_t(i) * dim + j];
        e = -e;
        if (i == j) e += 2.0;
      }
    }
    X = mat_mul(X, GX, dim);
  }
  return X;
}

MetricJets metric_jets(const MetricPatch& metric, std::span<const Jet> x) {
  check_point(metric.dim, x, "metric_jets");
  MetricJets out;
  out.dim = metric.dim;
  out.order = x[0].order();
  out.g.assign(std::size_t(metric.dim) * metric.dim,
               Jet(metric.dim, out.order, 0.0));
  for (int i = 0; i < metric.dim; ++i) {
    for (int j = i; j < metric.dim; ++j) {
      Jet value = metric.component(i, j)(x);
      out.g[std::size_t(i) * metric.dim + j] = value;
      if (i != j) out.g[std::size_t(j) * metric.dim + i] = std::move(value);
    }
  }
  out.ginv = jet_matrix_inverse_spd(out.g, metric.dim);
  return out;
}

std::vector<Jet> christoffel_jets(const MetricPatch& metric,
                                  std::span<const Jet> x) {
  check_point(metric.dim, x, "christoffel_jets");
  const int dim = metric.dim;
  const int order = x[0].order();
  if (order < 1) {
    throw std::invalid_argument(
        "christoffel_jets: coordinate jets must have order >= 1");
  }
  const MetricJets m = metric_jets(metric, x);

  // dg[(l*dim + i)*dim + j] = d_l g_ij, order - 1.
  std::vector<Jet> dg;
  dg.reserve(std::size_t(dim) * dim * dim);
  for (int l = 0; l < dim; ++l) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        dg.push_back(m.lower(i, j).derivative(l));
      }
    }
  }
  auto dgat = [&](int l, int i, int j) -> const Jet& {
    return dg[(std::size_t(l) * dim + i) * dim + j];
  };

  std::vector<Jet> gamma(std::size_t(dim) * dim * dim,
                         Jet(dim, order - 1, 0.0));
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < dim; ++i) {
      for (int j = i; j < dim; ++j) {
        Jet acc(dim, order - 1, 0.0);
        for (int l = 0; l < dim; ++l) {
          acc += m.upper(k, l).truncated(order - 1) *
                 (dgat(i, l, j) + dgat(j, l, i) - dgat(l, i, j));
        }
        acc *= 0.5;
        gamma[(std::size_t(k) * dim + i) * dim + j] = acc;
        if (i != j) gamma[(std::size_t(k) * dim + j) * dim + i] = std::move(acc);
      }
    }
  }
  return gamma;
}

CurvatureValues curvature(const MetricPatch& metric,
                          std::span<const double> x) {
  const int dim = metric.dim;
  const auto seeds = seed_point(x, 2);
  const auto gamma = christoffel_jets(metric, seeds);  // order 1
  auto at = [&](int k, int i, int j) -> const Jet& {
    return gamma[(std::size_t(k) * dim + i) * dim + j];
  };

  CurvatureValues out;
  out.dim = dim;
  out.riemann.assign(std::size_t(dim) * dim * dim * dim, 0.0);
  auto R = [&](int r, int s, int m, int n) -> double& {
    return out.riemann[((std::size_t(r) * dim + s) * dim + m) * dim + n];
  };

  for (int r = 0; r < dim; ++r) {
    for (int s = 0; s < dim; ++s) {
      for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < m; ++n) {
          double value = at(r, n, s).derivative(m).value() -
                         at(r, m, s).derivative(n).value();
          for (int l = 0; l < dim; ++l) {
            value += at(r, m, l).value() * at(l, n, s).value() -
                     at(r, n, l).value() * at(l, m, s).value();
          }
          R(r, s, m, n) = value;
          R(r, s, n, m) = -value;
        }
      }
    }
  }

  out.ricci = Eigen::MatrixXd::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    for (int n = 0; n < dim; ++n) {
      double trace = 0.0;
      for (int r = 0; r < dim; ++r) trace += R(r, s, r, n);
      out.ricci(s, n) = trace;
    }
  }

  const Eigen::MatrixXd g = metric_value(metric, x);
  const Eigen::MatrixXd ginv =
      g.llt().solve(Eigen::MatrixXd::Identity(dim, dim));
  out.scalar = ginv.cwiseProduct(out.ricci).sum();
  return out;
}

Eigen::MatrixXd metric_value(const MetricPatch& metric,
                             std::span<const double> x) {
  const auto seeds = seed_point(x, 0);
  Eigen::MatrixXd g(metric.dim, metric.dim);
  for (int i = 0; i < metric.dim; ++i) {
    for (int j = i; j < metric.dim; ++j) {
      g(i, j) = metric.component(i, j)(seeds).value();
      g(j, i) = g(i, j);
    }
  }
  return g;
}

Jet laplacian(const MetricPatch& metric, std::span<const Jet> x, const Jet& f) {
  const int K = f.order();
  if (K < 2) {
    throw std::invalid_argument("laplacian: needs a jet of order >= 2");
  }
  const int dim = metric.dim;
  const auto gamma = christoffel_jets(metric, truncate_all(x, K - 1));
  const MetricJets m = metric_jets(metric, truncate_all(x, K - 2));

  std::vector<Jet> df;
  df.reserve(dim);
  for (int k = 0; k < dim; ++k) df.push_back(f.derivative(k).truncated(K - 2));

  Jet acc(dim, K - 2, 0.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      Jet term = f.derivative(i).derivative(j);
      for (int k = 0; k < dim; ++k) {
        term -= gamma[(std::size_t(k) * dim + i) * dim + j] * df[k];
      }
      acc += m.upper(i, j) * term;
    }
  }
  return acc;
}

std::vector<Jet> gradient(const MetricPatch& metric, std::span<const Jet> x,
                          const Jet& f) {
  const int K = f.order();
  if (K < 1) {
    throw std::invalid_argument("gradient: needs a jet of order >= 1");
  }
  const int dim = metric.dim;
  const MetricJets m = metric_jets(metric, truncate_all(x, K - 1));
  std::vector<Jet> out(dim, Jet(dim, K - 1, 0.0));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      out[i] += m.upper(i, j) * f.derivative(j);
    }
  }
  return out;
}

Jet divergence_oneform(const MetricPatch& metric, std::span<const Jet> x,
                       std::span<const Jet> omega) {
  const int dim = metric.dim;
  if (int(omega.size()) != dim) {
    throw std::invalid_argument("divergence_oneform: component count mismatch");
  }
  const int K = omega[0].order();
  if (K < 1) {
    throw std::invalid_argument("divergence_oneform: needs order >= 1");
  }
  const auto gamma = christoffel_jets(metric, truncate_all(x, K));
  const MetricJets m = metric_jets(metric, truncate_all(x, K - 1));

  Jet acc(dim, K - 1, 0.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      Jet term = omega[j].derivative(i);
      for (int k = 0; k < dim; ++k) {
        term -= gamma[(std::size_t(k) * dim + i) * dim + j] *
                omega[k].truncated(K - 1);
      }
      acc += m.upper(i, j) * term;
    }
  }
  return acc;
}

std::vector<Jet> vector_laplacian(const MetricPatch& metric,
                                  std::span<const Jet> x,
                                  std::span<const Jet> X) {
  const int dim = metric.dim;
  if (int(X.size()) != dim) {
    throw std::invalid_argument("vector_laplacian: component count mismatch");
  }
  const int K = X[0].order();
  if (K < 2) {
    throw std::invalid_argument("vector_laplacian: needs order >= 2");
  }
  const auto gamma1 = christoffel_jets(metric, truncate_all(x, K));  // K - 1
  auto G1 = [&](int k, int i, int j) -> const Jet& {
    return gamma1[(std::size_t(k) * dim + i) * dim + j];
  };

  // covar[j * dim + a] = (nabla_j X)^a, order K - 1.
  std::vector<Jet> covar(std::size_t(dim) * dim, Jet(dim, K - 1, 0.0));
  for (int j = 0; j < dim; ++j) {
    for (int a = 0; a < dim; ++a) {
      Jet term = X[a].derivative(j);
      for (int c = 0; c < dim; ++c) {
        term += G1(a, j, c) * X[c].truncated(K - 1);
      }
      covar[std::size_t(j) * dim + a] = std::move(term);
    }
  }

  const MetricJets m = metric_jets(metric, truncate_all(x, K - 2));
  std::vector<Jet> out(dim, Jet(dim, K - 2, 0.0));
  for (int a = 0; a < dim; ++a) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        Jet term = covar[std::size_t(j) * dim + a].derivative(i);
        for (int c = 0; c < dim; ++c) {
          term += G1(a, i, c).truncated(K - 2) *
                  covar[std::size_t(j) * dim + c].truncated(K - 2);
        }
        for (int k = 0; k < dim; ++k) {
          term -= G1(k, i, j).truncated(K - 2) *
                  covar[std::size_t(k) * dim + a].truncated(K - 2);
        }
        out[a] += m.upper(i, j) * term;
      }
    }
  }
  return out;
}

}  // namespace bhmap
