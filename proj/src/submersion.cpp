#include "bhmap/submersion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace bhmap {

namespace {

constexpr double kRankTol = 1e-10;

std::vector<Jet> truncate_field(std::span<const Jet> v, int order) {
  std::vector<Jet> out;
  out.reserve(v.size());
  for (const Jet& j : v) {
    out.push_back(j.order() == order ? j : j.truncated(order));
  }
  return out;
}

// Basis of ker(dphi) at the frame's order via Gauss-Jordan elimination with
// jet entries, pivoting on the largest constant term.
std::vector<std::vector<Jet>> kernel_basis(const MapJets& mj, int order) {
  const int n = mj.target_dim;
  const int m = mj.domain_dim;
  std::vector<std::vector<Jet>> r(n);
  for (int a = 0; a < n; ++a) {
    r[a].reserve(m);
    for (int i = 0; i < m; ++i) {
      r[a].push_back(mj.phi[a].derivative(i).truncated(order));
    }
  }

  std::vector<int> pivot_col(n, -1);
  std::vector<bool> used(m, false);
  for (int row = 0; row < n; ++row) {
    int pr = -1, pc = -1;
    double best = 0.0;
    for (int r2 = row; r2 < n; ++r2) {
      for (int c = 0; c < m; ++c) {
        if (used[c]) continue;
        const double mag = std::abs(r[r2][c].value());
        if (mag > best) {
          best = mag;
          pr = r2;
          pc = c;
        }
      }
    }
    if (best < kRankTol) {
      throw std::domain_error(
          "submersion_frame: differential is rank-deficient at this point");
    }
    std::swap(r[row], r[pr]);
    const Jet piv = r[row][pc];
    for (int c = 0; c < m; ++c) r[row][c] = r[row][c] / piv;
    for (int r2 = 0; r2 < n; ++r2) {
      if (r2 == row) continue;
      const Jet factor = r[r2][pc];
      for (int c = 0; c < m; ++c) r[r2][c] -= factor * r[row][c];
    }
    used[pc] = true;
    pivot_col[row] = pc;
  }

  std::vector<std::vector<Jet>> ker;
  for (int c = 0; c < m; ++c) {
    if (used[c]) continue;
    std::vector<Jet> v(m, Jet(m, order, 0.0));
    v[c] = Jet(m, order, 1.0);
    for (int row = 0; row < n; ++row) v[pivot_col[row]] = -r[row][c];
    ker.push_back(std::move(v));
  }
  return ker;
}

void subtract_projection(const MetricPatch& domain, std::span<const Jet> x,
                         std::vector<Jet>& v, std::span<const Jet> unit) {
  const Jet coef = metric_pairing(domain, x, v, unit);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= coef * unit[i];
}

std::vector<Jet> normalized(const MetricPatch& domain, std::span<const Jet> x,
                            std::vector<Jet> v) {
  const Jet n2 = metric_pairing(domain, x, v, v);
  if (n2.value() < kRankTol) {
    throw std::domain_error("submersion_frame: degenerate frame vector");
  }
  const Jet inv = jet_reciprocal(sqrt(n2));
  for (Jet& c : v) c = c * inv;
  return v;
}

}  // namespace

Jet metric_pairing(const MetricPatch& domain, std::span<const Jet> x,
                   std::span<const Jet> u, std::span<const Jet> v) {
  const int dim = domain.dim;
  if (int(u.size()) != dim || int(v.size()) != dim) {
    throw std::invalid_argument("metric_pairing: component count mismatch");
  }
  const int order = std::min(u[0].order(), v[0].order());
  const MetricJets g = metric_jets(domain, truncate_field(x, order));
  const auto ut = truncate_field(u, order);
  const auto vt = truncate_field(v, order);
  Jet acc(dim, order, 0.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      acc += g.lower(i, j) * ut[i] * vt[j];
    }
  }
  return acc;
}

SubmersionFrame submersion_frame(const MetricPatch& domain,
                                 const SmoothMap& phi,
                                 std::span<const double> x, int order) {
  const MapJets mj = map_jets(phi, x, order + 1);
  const int m = mj.domain_dim;
  const int n = mj.target_dim;

  SubmersionFrame fr;
  fr.domain_dim = m;
  fr.horizontal_dim = n;
  fr.order = order;
  fr.x0.assign(x.begin(), x.end());
  fr.x = seed_point(x, order);

  // Vertical frame: orthonormalized kernel of dphi.
  for (auto& v : kernel_basis(mj, order)) {
    for (const auto& e : fr.vertical) subtract_projection(domain, fr.x, v, e);
    fr.vertical.push_back(normalized(domain, fr.x, std::move(v)));
  }

  // Horizontal frame: coordinate fields with the vertical part removed,
  // orthonormalized greedily (largest residual first).
  std::vector<std::vector<Jet>> cand(m);
  for (int i = 0; i < m; ++i) {
    cand[i].assign(m, Jet(m, order, 0.0));
    cand[i][i] = Jet(m, order, 1.0);
    for (const auto& e : fr.vertical) {
      subtract_projection(domain, fr.x, cand[i], e);
    }
  }
  std::vector<bool> taken(m, false);
  for (int k = 0; k < n; ++k) {
    int pick = -1;
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
      if (taken[i]) continue;
      std::vector<Jet> w = cand[i];
      for (const auto& e : fr.horizontal) {
        subtract_projection(domain, fr.x, w, e);
      }
      const double n2 = metric_pairing(domain, fr.x, w, w).value();
      if (n2 > best) {
        best = n2;
        pick = i;
      }
    }
    if (pick < 0 || best < kRankTol) {
      throw std::domain_error(
          "submersion_frame: could not complete the horizontal frame");
    }
    taken[pick] = true;
    std::vector<Jet> w = std::move(cand[pick]);
    for (const auto& e : fr.horizontal) subtract_projection(domain, fr.x, w, e);
    fr.horizontal.push_back(normalized(domain, fr.x, std::move(w)));
  }
  return fr;
}

namespace {

std::vector<Jet> frame_projection(const MetricPatch& domain,
                                  const SubmersionFrame& frame,
                                  std::span<const Jet> field,
                                  const std::vector<std::vector<Jet>>& span) {
  const int m = frame.domain_dim;
  if (int(field.size()) != m) {
    throw std::invalid_argument("frame projection: component count mismatch");
  }
  const int order = field[0].order();
  if (order > frame.order) {
    throw std::invalid_argument("frame projection: field order exceeds frame");
  }
  const auto x = truncate_field(frame.x, order);
  std::vector<Jet> out(m, Jet(m, order, 0.0));
  for (const auto& e : span) {
    const auto et = truncate_field(e, order);
    const Jet coef = metric_pairing(domain, x, field, et);
    for (int i = 0; i < m; ++i) out[i] += coef * et[i];
  }
  return out;
}

}  // namespace

std::vector<Jet> vertical_part(const MetricPatch& domain,
                               const SubmersionFrame& frame,
                               std::span<const Jet> field) {
  return frame_projection(domain, frame, field, frame.vertical);
}

std::vector<Jet> horizontal_part(const MetricPatch& domain,
                                 const SubmersionFrame& frame,
                                 std::span<const Jet> field) {
  auto v = frame_projection(domain, frame, field, frame.vertical);
  std::vector<Jet> out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) out.push_back(field[i] - v[i]);
  return out;
}

std::vector<Jet> covariant_derivative(const MetricPatch& domain,
                                      std::span<const Jet> x,
                                      std::span<const Jet> direction,
                                      std::span<const Jet> field) {
  const int m = domain.dim;
  if (int(direction.size()) != m || int(field.size()) != m) {
    throw std::invalid_argument(
        "covariant_derivative: component count mismatch");
  }
  const int order = field[0].order();
  if (order < 1) {
    throw std::invalid_argument("covariant_derivative: needs order >= 1");
  }
  const auto gamma = christoffel_jets(domain, truncate_field(x, order));
  const auto dir = truncate_field(direction, order - 1);
  const auto fld = truncate_field(field, order - 1);

  std::vector<Jet> out(m, Jet(m, order - 1, 0.0));
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) {
      out[k] += dir[i] * field[k].derivative(i);
      for (int j = 0; j < m; ++j) {
        out[k] += gamma[(std::size_t(k) * m + i) * m + j] * dir[i] * fld[j];
      }
    }
  }
  return out;
}

std::vector<double> fiber_mean_curvature(const MetricPatch& domain,
                                         const SmoothMap& phi,
                                         std::span<const double> x) {
  const SubmersionFrame fr = submersion_frame(domain, phi, x, 1);
  const int m = fr.domain_dim;
  std::vector<double> mu(m, 0.0);
  if (fr.vertical.empty()) return mu;
  for (const auto& e : fr.vertical) {
    const auto d = covariant_derivative(domain, fr.x, e, e);
    const auto h = horizontal_part(domain, fr, d);
    for (int i = 0; i < m; ++i) mu[i] += h[i].value();
  }
  for (double& c : mu) c /= double(fr.vertical.size());
  return mu;
}

std::vector<double> horizontal_mean_curvature(const MetricPatch& domain,
                                              const SmoothMap& phi,
                                              std::span<const double> x) {
  const SubmersionFrame fr = submersion_frame(domain, phi, x, 1);
  const int m = fr.domain_dim;
  std::vector<double> nu(m, 0.0);
  for (const auto& e : fr.horizontal) {
    const auto d = covariant_derivative(domain, fr.x, e, e);
    const auto v = vertical_part(domain, fr, d);
    for (int i = 0; i < m; ++i) nu[i] += v[i].value();
  }
  for (double& c : nu) c /= double(fr.horizontal.size());
  return nu;
}

std::vector<double> fundamental_a(const MetricPatch& domain,
                                  const SubmersionFrame& frame,
                                  std::span<const Jet> e,
                                  std::span<const Jet> f) {
  const auto eh = horizontal_part(domain, frame, e);
  const auto fh = horizontal_part(domain, frame, f);
  const auto d = covariant_derivative(domain, frame.x, eh, fh);
  const auto v = vertical_part(domain, frame, d);
  std::vector<double> out;
  out.reserve(v.size());
  for (const Jet& c : v) out.push_back(c.value());
  return out;
}

std::vector<double> fundamental_b(const MetricPatch& domain,
                                  const SubmersionFrame& frame,
                                  std::span<const Jet> e,
                                  std::span<const Jet> f) {
  const auto ev = vertical_part(domain, frame, e);
  const auto fv = vertical_part(domain, frame, f);
  const auto d = covariant_derivative(domain, frame.x, ev, fv);
  const auto h = horizontal_part(domain, frame, d);
  std::vector<double> out;
  out.reserve(h.size());
  for (const Jet& c : h) out.push_back(c.value());
  return out;
}

std::vector<double> tension_via_frame(const MetricPatch& domain,
                                      const MetricPatch& target,
                                      const SmoothMap& phi,
                                      std::span<const double> x) {
  const int m = phi.domain_dim;
  const int n = phi.target_dim;
  const MapJets mj = map_jets(phi, x, 2);
  const Jet lam2 = dilation_jets(domain, target, mj, 1);
  if (lam2.value() <= 1e-12) {
    throw std::domain_error("tension_via_frame: map is degenerate here");
  }
  const Jet log_lambda = 0.5 * log(lam2);
  const auto grad = gradient(domain, mj.x, log_lambda);

  const SubmersionFrame fr = submersion_frame(domain, phi, x, 0);
  const auto grad_h = horizontal_part(domain, fr, grad);
  const auto mu = fiber_mean_curvature(domain, phi, x);

  std::vector<double> xfield(m);
  for (int i = 0; i < m; ++i) {
    xfield[i] = (2.0 - n) * grad_h[i].value() - double(m - n) * mu[i];
  }

  std::vector<double> tau(n, 0.0);
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < m; ++i) {
      tau[a] += mj.phi[a].derivative(i).value() * xfield[i];
    }
  }
  return tau;
}

}  // namespace bhmap
