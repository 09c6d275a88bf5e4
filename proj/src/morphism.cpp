#include "bhmap/morphism.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bhmap {

namespace {

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& g) {
  return g.llt().solve(Eigen::MatrixXd::Identity(g.rows(), g.cols()));
}

Eigen::MatrixXd differential_values(const MapJets& mj) {
  Eigen::MatrixXd d(mj.target_dim, mj.domain_dim);
  for (int a = 0; a < mj.target_dim; ++a) {
    for (int i = 0; i < mj.domain_dim; ++i) {
      d(a, i) = mj.phi[a].derivative(i).value();
    }
  }
  return d;
}

Eigen::MatrixXd s_tensor_values(const MetricPatch& domain,
                                const MetricPatch& target, const MapJets& mj,
                                std::span<const Jet> tau1) {
  const int m = mj.domain_dim;
  const int n = mj.target_dim;
  const Eigen::MatrixXd dphi = differential_values(mj);
  Eigen::MatrixXd dtau(n, m);
  for (int b = 0; b < n; ++b) {
    for (int j = 0; j < m; ++j) {
      dtau(b, j) = tau1[b].derivative(j).value();
    }
  }
  const Eigen::MatrixXd ginv0 = spd_inverse(metric_value(domain, mj.x0));
  const Eigen::MatrixXd hinv0 = spd_inverse(metric_value(target, mj.y0));
  const double lam2 = dilation_jets(domain, target, mj, 0).value();
  const auto gamma_n = christoffel_jets(target, seed_point(mj.y0, 1));

  Eigen::MatrixXd half = dphi * ginv0 * dtau.transpose();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double conn = 0.0;
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          conn += hinv0(a, d) *
                  gamma_n[(std::size_t(b) * n + c) * n + d].value() *
                  tau1[c].value();
        }
      }
      half(a, b) += lam2 * conn;
    }
  }
  return half + half.transpose();
}

}  // namespace

Eigen::MatrixXd s_tensor(const MetricPatch& domain, const MetricPatch& target,
                         const SmoothMap& phi, std::span<const double> x) {
  const MapJets mj = map_jets(phi, x, 3);
  const auto tau1 = tension_jets(domain, target, mj, 1);
  return s_tensor_values(domain, target, mj, tau1);
}

FourHarmonicReport four_harmonic_residual(const MetricPatch& domain,
                                          const MetricPatch& target,
                                          const SmoothMap& phi,
                                          std::span<const double> x) {
  const MapJets mj = map_jets(phi, x, 3);
  const int n = mj.target_dim;
  const Jet lam2 = dilation_jets(domain, target, mj, 1);
  const auto grad = gradient(domain, mj.x, lam2);
  const auto tau0 = tension_jets(domain, target, mj, 0);
  const Eigen::MatrixXd dphi = differential_values(mj);
  const Eigen::MatrixXd h0 = metric_value(target, mj.y0);

  FourHarmonicReport rep;
  rep.residual.resize(n);
  std::vector<double> tension_part(n), push_part(n);
  for (int a = 0; a < n; ++a) {
    tension_part[a] = lam2.value() * tau0[a].value();
    double push = 0.0;
    for (int k = 0; k < mj.domain_dim; ++k) {
      push += dphi(a, k) * grad[k].value();
    }
    push_part[a] = push;
    rep.residual[a] = tension_part[a] + push;
  }
  rep.norm = norm_in_metric(h0, rep.residual);
  rep.normalized = rep.norm / std::max({1.0, norm_in_metric(h0, tension_part),
                                        norm_in_metric(h0, push_part)});
  return rep;
}

QuarticReport quartic_residual(const MetricPatch& domain,
                               const MetricPatch& target, const SmoothMap& phi,
                               std::span<const double> x) {
  const MapJets mj = map_jets(phi, x, 3);
  const int m = mj.domain_dim;
  const int n = mj.target_dim;

  const Jet lam2 = dilation_jets(domain, target, mj, 2);
  const double lap = laplacian(domain, mj.x, lam2).value();

  const auto tau1 = tension_jets(domain, target, mj, 1);
  const auto h_along = target_metric_along(target, mj, 1);

  std::vector<Jet> dphi1;
  dphi1.reserve(std::size_t(n) * m);
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < m; ++i) {
      dphi1.push_back(mj.phi[a].derivative(i).truncated(1));
    }
  }

  // Pairing one-form w_i = h_ab d_i phi^a tau^b and the scalar |tau|^2,
  // both as first-order jets so one more derivative stays exact.
  std::vector<Jet> w(m, Jet(m, 1, 0.0));
  Jet tau_sq(m, 1, 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Jet& hab = h_along[std::size_t(a) * n + b];
      tau_sq += hab * tau1[a] * tau1[b];
      for (int i = 0; i < m; ++i) {
        w[i] += hab * dphi1[std::size_t(a) * m + i] * tau1[b];
      }
    }
  }

  const double divw = divergence_oneform(domain, mj.x, w).value();
  const auto grad_tau_sq = gradient(domain, mj.x, tau_sq);
  double w_grad = 0.0;
  for (int i = 0; i < m; ++i) {
    w_grad += w[i].value() * grad_tau_sq[i].value();
  }

  const Eigen::MatrixXd s = s_tensor_values(domain, target, mj, tau1);
  const Eigen::MatrixXd h0 = metric_value(target, mj.y0);
  const Eigen::MatrixXd hs = h0 * s;

  QuarticReport rep;
  rep.lap_lambda2 = lap;
  rep.tau_norm2 = tau_sq.value();
  rep.pairing_div = divw;
  rep.s_norm2 = (hs * hs).trace();
  rep.terms = {rep.tau_norm2 * rep.tau_norm2,
               -2.0 * lap * rep.tau_norm2,
               4.0 * lap * divw,
               double(n) * lap * lap,
               2.0 * w_grad,
               rep.s_norm2};
  rep.partial_sum = rep.terms[0] + rep.terms[1] + rep.terms[2] + rep.terms[3] +
                    rep.terms[4];
  rep.total = rep.partial_sum + rep.terms[5];
  double scale = 1.0;
  for (double t : rep.terms) scale = std::max(scale, std::abs(t));
  rep.normalized = std::abs(rep.total) / scale;
  rep.trace_screen = double(n) * lap + 2.0 * divw - rep.tau_norm2;
  return rep;
}

double trace_screen(const MetricPatch& domain, const MetricPatch& target,
                    const SmoothMap& phi, std::span<const double> x) {
  return quartic_residual(domain, target, phi, x).trace_screen;
}

MorphismPointReport morphism_point(const MetricPatch& domain,
                                   const MetricPatch& target,
                                   const SmoothMap& phi,
                                   std::span<const double> x, double tol) {
  MorphismPointReport rep;
  rep.hwc = hwc_check(domain, target, phi, x);
  rep.bitension = bitension(domain, target, phi, x);
  rep.four_harmonic = four_harmonic_residual(domain, target, phi, x);
  rep.quartic = quartic_residual(domain, target, phi, x);
  rep.harmonic_normalized =
      rep.bitension.tau_norm / std::max(1.0, target.dim * rep.hwc.lambda2);

  MorphismVerdict& v = rep.verdict;
  v.regular = rep.hwc.regular;
  v.hwc = rep.hwc.residual < tol;
  v.harmonic = rep.harmonic_normalized < tol;
  v.biharmonic = rep.bitension.normalized < tol;
  v.four_harmonic = rep.four_harmonic.normalized < tol;
  v.morphism = v.regular && v.hwc && v.biharmonic && v.four_harmonic &&
               rep.quartic.normalized < tol;
  return rep;
}

}  // namespace bhmap
