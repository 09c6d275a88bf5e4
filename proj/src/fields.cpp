#include "bhmap/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bhmap {

namespace {

std::vector<Jet> truncate_all(std::span<const Jet> v, int order) {
  std::vector<Jet> out;
  out.reserve(v.size());
  for (const Jet& j : v) out.push_back(j.order() == order ? j : j.truncated(order));
  return out;
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& g) {
  return g.llt().solve(Eigen::MatrixXd::Identity(g.rows(), g.cols()));
}

// dphi entries as jets of the given order (mj.order must exceed it).
std::vector<Jet> differential_jets(const MapJets& mj, int order) {
  std::vector<Jet> d;
  d.reserve(std::size_t(mj.target_dim) * mj.domain_dim);
  for (int a = 0; a < mj.target_dim; ++a) {
    for (int i = 0; i < mj.domain_dim; ++i) {
      Jet entry = mj.phi[a].derivative(i);
      d.push_back(entry.order() == order ? std::move(entry)
                                         : entry.truncated(order));
    }
  }
  return d;
}

}  // namespace

MapJets map_jets(const SmoothMap& phi, std::span<const double> x0, int order) {
  if (int(x0.size()) != phi.domain_dim) {
    throw std::invalid_argument("map_jets: point dimension mismatch");
  }
  MapJets mj;
  mj.domain_dim = phi.domain_dim;
  mj.target_dim = phi.target_dim;
  mj.order = order;
  mj.x0.assign(x0.begin(), x0.end());
  mj.x = seed_point(x0, order);
  mj.phi = phi.eval(mj.x);
  mj.y0.reserve(mj.phi.size());
  for (const Jet& c : mj.phi) mj.y0.push_back(c.value());
  return mj;
}

std::vector<Jet> target_metric_along(const MetricPatch& target,
                                     const MapJets& mj, int order) {
  const auto y = seed_point(mj.y0, order);
  const MetricJets hy = metric_jets(target, y);
  const auto args = truncate_all(mj.phi, order);
  std::vector<Jet> out;
  out.reserve(hy.g.size());
  for (const Jet& component : hy.g) out.push_back(jet_compose(component, args));
  return out;
}

std::vector<Jet> target_metric_inverse_along(const MetricPatch& target,
                                             const MapJets& mj, int order) {
  const auto y = seed_point(mj.y0, order);
  const MetricJets hy = metric_jets(target, y);
  const auto args = truncate_all(mj.phi, order);
  std::vector<Jet> out;
  out.reserve(hy.ginv.size());
  for (const Jet& component : hy.ginv) out.push_back(jet_compose(component, args));
  return out;
}

std::vector<Jet> target_christoffel_along(const MetricPatch& target,
                                          const MapJets& mj, int order) {
  const auto y = seed_point(mj.y0, order + 1);
  const auto gamma_y = christoffel_jets(target, y);  // target jets, `order`
  const auto args = truncate_all(mj.phi, order);
  std::vector<Jet> out;
  out.reserve(gamma_y.size());
  for (const Jet& component : gamma_y) out.push_back(jet_compose(component, args));
  return out;
}

Jet dilation_jets(const MetricPatch& domain, const MetricPatch& target,
                  const MapJets& mj, int order) {
  const int m = mj.domain_dim;
  const int n = mj.target_dim;
  const MetricJets gx = metric_jets(domain, truncate_all(mj.x, order));
  const auto h = target_metric_along(target, mj, order);
  const auto d = differential_jets(mj, order);
  auto dphi = [&](int a, int i) -> const Jet& {
    return d[std::size_t(a) * m + i];
  };

  Jet energy(m, order, 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Jet pulled(m, order, 0.0);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          pulled += gx.upper(i, j) * dphi(a, i) * dphi(b, j);
        }
      }
      energy += h[std::size_t(a) * n + b] * pulled;
    }
  }
  // |dphi|^2 = n lambda^2 for a horizontally weakly conformal map: dphi
  // kills the vertical space and scales an n-dimensional horizontal one.
  return energy / double(n);
}

std::vector<Jet> tension_jets(const MetricPatch& domain,
                              const MetricPatch& target, const MapJets& mj,
                              int order) {
  const int m = mj.domain_dim;
  const int n = mj.target_dim;
  if (mj.order < order + 2) {
    throw std::invalid_argument("tension_jets: map jets are too shallow");
  }
  const auto gamma_g = christoffel_jets(domain, truncate_all(mj.x, order + 1));
  const MetricJets gx = metric_jets(domain, truncate_all(mj.x, order));
  const auto gamma_n = target_christoffel_along(target, mj, order);
  const auto d = differential_jets(mj, order);
  auto dphi = [&](int a, int i) -> const Jet& {
    return d[std::size_t(a) * m + i];
  };

  std::vector<Jet> tau(n, Jet(m, order, 0.0));
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        Jet term = mj.phi[a].derivative(i).derivative(j).truncated(order);
        for (int k = 0; k < m; ++k) {
          term -= gamma_g[(std::size_t(k) * m + i) * m + j] *
                  mj.phi[a].derivative(k).truncated(order);
        }
        for (int b = 0; b < n; ++b) {
          for (int c = 0; c < n; ++c) {
            term += gamma_n[(std::size_t(a) * n + b) * n + c] * dphi(b, i) *
                    dphi(c, j);
          }
        }
        tau[a] += gx.upper(i, j) * term;
      }
    }
  }
  return tau;
}

std::vector<Jet> pullback_trace_laplacian(const MetricPatch& domain,
                                          const MetricPatch& target,
                                          const MapJets& mj,
                                          std::span<const Jet> V) {
  const int m = mj.domain_dim;
  const int n = mj.target_dim;
  if (int(V.size()) != n) {
    throw std::invalid_argument(
        "pullback_trace_laplacian: section component count mismatch");
  }
  const int K = V[0].order();
  if (K < 2) {
    throw std::invalid_argument("pullback_trace_laplacian: needs order >= 2");
  }

  const auto gamma_n1 = target_christoffel_along(target, mj, K - 1);
  const auto d1 = differential_jets(mj, K - 1);
  auto dphi1 = [&](int a, int i) -> const Jet& {
    return d1[std::size_t(a) * m + i];
  };

  // cov[j*n + a] = (nabla^phi_j V)^a at order K-1.
  std::vector<Jet> cov(std::size_t(m) * n, Jet(m, K - 1, 0.0));
  for (int j = 0; j < m; ++j) {
    for (int a = 0; a < n; ++a) {
      Jet term = V[a].derivative(j);
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          term += gamma_n1[(std::size_t(a) * n + b) * n + c] *
                  V[b].truncated(K - 1) * dphi1(c, j);
        }
      }
      cov[std::size_t(j) * n + a] = std::move(term);
    }
  }

  const auto gamma_g = christoffel_jets(domain, truncate_all(mj.x, K - 1));
  const MetricJets gx = metric_jets(domain, truncate_all(mj.x, K - 2));
  std::vector<Jet> out(n, Jet(m, K - 2, 0.0));
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        Jet term = cov[std::size_t(j) * n + a].derivative(i);
        for (int b = 0; b < n; ++b) {
          for (int c = 0; c < n; ++c) {
            term += gamma_n1[(std::size_t(a) * n + b) * n + c].truncated(K - 2) *
                    cov[std::size_t(j) * n + b].truncated(K - 2) *
                    dphi1(c, i).truncated(K - 2);
          }
        }
        for (int k = 0; k < m; ++k) {
          term -= gamma_g[(std::size_t(k) * m + i) * m + j] *
                  cov[std::size_t(k) * n + a].truncated(K - 2);
        }
        out[a] += gx.upper(i, j) * term;
      }
    }
  }
  return out;
}

Eigen::MatrixXd differential(const SmoothMap& phi, std::span<const double> x) {
  const MapJets mj = map_jets(phi, x, 1);
  Eigen::MatrixXd d(phi.target_dim, phi.domain_dim);
  for (int a = 0; a < phi.target_dim; ++a) {
    for (int i = 0; i < phi.domain_dim; ++i) {
      d(a, i) = mj.phi[a].partial(MultiIndex::unit(phi.domain_dim, i));
    }
  }
  return d;
}

double norm_in_metric(const Eigen::MatrixXd& h, std::span<const double> v) {
  const Eigen::Map<const Eigen::VectorXd> vec(v.data(), v.size());
  return std::sqrt(vec.dot(h * vec));
}

HwcReport hwc_check(const MetricPatch& domain, const MetricPatch& target,
                    const SmoothMap& phi, std::span<const double> x) {
  const int m = phi.domain_dim;
  const int n = phi.target_dim;
  const Eigen::MatrixXd d = differential(phi, x);
  const Eigen::MatrixXd ginv = spd_inverse(metric_value(domain, x));
  const Eigen::MatrixXd h = metric_value(target, phi.value(x));
  const Eigen::MatrixXd hinv = spd_inverse(h);

  // T^ab = g^ij d_i phi^a d_j phi^b; HWC means T = lambda^2 h^{-1}.
  const Eigen::MatrixXd T = d * ginv * d.transpose();
  HwcReport report;
  report.lambda2 = (h * T).trace() / double(n);
  report.residual = (T - report.lambda2 * hinv).cwiseAbs().maxCoeff() /
                    std::max(1.0, report.lambda2);
  report.regular = report.lambda2 > 1e-12;
  (void)m;
  return report;
}

double energy_density(const MetricPatch& domain, const MetricPatch& target,
                      const SmoothMap& phi, std::span<const double> x) {
  const MapJets mj = map_jets(phi, x, 1);
  const Jet lambda2 = dilation_jets(domain, target, mj, 0);
  return 0.5 * double(phi.target_dim) * lambda2.value();
}

std::vector<double> tension(const MetricPatch& domain,
                            const MetricPatch& target, const SmoothMap& phi,
                            std::span<const double> x) {
  const MapJets mj = map_jets(phi, x, 2);
  const auto tau = tension_jets(domain, target, mj, 0);
  std::vector<double> out;
  out.reserve(tau.size());
  for (const Jet& t : tau) out.push_back(t.value());
  return out;
}

std::vector<double> p_tension(const MetricPatch& domain,
                              const MetricPatch& target, const SmoothMap& phi,
                              std::span<const double> x, double p) {
  const int m = phi.domain_dim;
  const int n = phi.target_dim;
  const MapJets mj = map_jets(phi, x, 3);
  const Jet e = dilation_jets(domain, target, mj, 2) * double(n);  // |dphi|^2
  const double e0 = e.value();

  if (e0 < 1e-12) {
    if (p >= 4.0) return std::vector<double>(n, 0.0);
    throw std::domain_error(
        "p_tension: |dphi| vanishes at this point and p < 4 makes the "
        "prefactor singular");
  }

  const auto tau = tension_jets(domain, target, mj, 0);
  const auto grad_e = gradient(domain, mj.x, e.truncated(1));
  const Eigen::MatrixXd d = differential(phi, x);

  std::vector<double> out(n, 0.0);
  const double prefactor = std::pow(e0, (p - 4.0) / 2.0);
  for (int a = 0; a < n; ++a) {
    double pushed = 0.0;
    for (int k = 0; k < m; ++k) pushed += d(a, k) * grad_e[k].value();
    out[a] = prefactor * (e0 * tau[a].value() + 0.5 * (p - 2.0) * pushed);
  }
  return out;
}

BitensionReport bitension(const MetricPatch& domain, const MetricPatch& target,
                          const SmoothMap& phi, std::span<const double> x) {
  const int m = phi.domain_dim;
  const int n = phi.target_dim;
  const MapJets mj = map_jets(phi, x, 4);

  const auto tau = tension_jets(domain, target, mj, 2);
  const auto trace = pullback_trace_laplacian(domain, target, mj, tau);

  const CurvatureValues curv = curvature(target, mj.y0);
  const Eigen::MatrixXd ginv = spd_inverse(metric_value(domain, x));
  const Eigen::MatrixXd d = differential(phi, x);

  BitensionReport report;
  report.tau.resize(n);
  report.tau2.resize(n);
  report.trace_part.resize(n);
  report.curvature_part.resize(n);
  for (int a = 0; a < n; ++a) {
    report.tau[a] = tau[a].value();
    report.trace_part[a] = trace[a].value();
  }

  auto R = [&](int r, int s, int mu, int nu) {
    return curv.riemann[((std::size_t(r) * n + s) * n + mu) * n + nu];
  };
  for (int rho = 0; rho < n; ++rho) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        if (ginv(i, j) == 0.0) continue;
        for (int mu = 0; mu < n; ++mu) {
          for (int nu = 0; nu < n; ++nu) {
            for (int sg = 0; sg < n; ++sg) {
              acc += ginv(i, j) * R(rho, sg, mu, nu) * d(mu, i) *
                     report.tau[nu] * d(sg, j);
            }
          }
        }
      }
    }
    report.curvature_part[rho] = acc;
    report.tau2[rho] = report.trace_part[rho] - acc;
  }

  const Eigen::MatrixXd h = metric_value(target, mj.y0);
  report.tau_norm = norm_in_metric(h, report.tau);
  report.tau2_norm = norm_in_metric(h, report.tau2);
  const double scale =
      std::max({1.0, norm_in_metric(h, report.trace_part),
                norm_in_metric(h, report.curvature_part)});
  report.normalized = report.tau2_norm / scale;
  return report;
}

ConformalBiharmonicReport conformal_biharmonic_residual(
    const MetricPatch& domain, const MetricPatch& target, const SmoothMap& phi,
    std::span<const double> x) {
  const int n = phi.domain_dim;
  if (phi.target_dim != n) {
    throw std::invalid_argument(
        "conformal_biharmonic_residual: needs equal domain and target "
        "dimensions");
  }
  const MapJets mj = map_jets(phi, x, 4);
  const Jet lambda2 = dilation_jets(domain, target, mj, 3);
  if (lambda2.value() <= 1e-12) {
    throw std::domain_error(
        "conformal_biharmonic_residual: map is degenerate at this point");
  }

  const Jet ln_lambda = log(lambda2) * 0.5;                  // order 3
  const auto v = gradient(domain, mj.x, ln_lambda);          // order 2
  const auto trace_v = vector_laplacian(domain, mj.x, v);    // order 0
  const double lap_ln = laplacian(domain, mj.x, ln_lambda).value();

  // |v|^2 as an order-2 jet, then its gradient.
  const MetricJets gx = metric_jets(domain, truncate_all(mj.x, 2));
  Jet v2(n, 2, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      v2 += gx.lower(i, j) * v[i] * v[j];
    }
  }
  const auto grad_v2 = gradient(domain, mj.x, v2);           // order 1

  const Eigen::MatrixXd d = differential(phi, x);
  auto push = [&](auto&& w) {
    std::vector<double> out(n, 0.0);
    for (int a = 0; a < n; ++a) {
      for (int k = 0; k < n; ++k) out[a] += d(a, k) * w[k];
    }
    return out;
  };
  std::vector<double> v_val(n), trace_val(n), grad_v2_val(n);
  for (int i = 0; i < n; ++i) {
    v_val[i] = v[i].value();
    trace_val[i] = trace_v[i].value();
    grad_v2_val[i] = grad_v2[i].value();
  }
  const auto dphi_v = push(v_val);
  const auto dphi_trace = push(trace_val);
  const auto dphi_grad_v2 = push(grad_v2_val);

  const CurvatureValues curv = curvature(target, mj.y0);
  const Eigen::MatrixXd h = metric_value(target, mj.y0);
  const Eigen::MatrixXd ric_up = spd_inverse(h) * curv.ricci;

  ConformalBiharmonicReport report;
  report.lambda = std::sqrt(lambda2.value());
  report.residual.resize(n);
  for (int a = 0; a < n; ++a) {
    double ric_term = 0.0;
    for (int b = 0; b < n; ++b) ric_term += ric_up(a, b) * dphi_v[b];
    report.residual[a] = dphi_trace[a] - lap_ln * dphi_v[a] +
                         2.0 * dphi_grad_v2[a] +
                         (2.0 - n) * v2.value() * dphi_v[a] +
                         lambda2.value() * ric_term;
  }
  report.residual_norm = norm_in_metric(h, report.residual);
  report.frame_norm = report.residual_norm / report.lambda;
  return report;
}

}  // namespace bhmap
