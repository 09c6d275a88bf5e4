#pragma once

// Tension-type fields of a map between Riemannian charts. Everything is
// assembled from jets of the map and of both metrics:
//
//   tau^a   = g^ij (dd_ij phi^a - Gamma^k_ij d_k phi^a
//             + Gamma^a_bc(phi) d_i phi^b d_j phi^c)
//   tau2    = trace of the squared pulled-back connection applied to tau,
//             minus the target-curvature contraction  g^ij R(dphi_i, tau)
//             dphi_j  — a map is biharmonic when this vanishes.
//
// Target-side quantities along the map (metric, connection) are computed as
// jets in target coordinates at phi(x) and then substituted with the map's
// own jets, which keeps every derivative exact.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bhmap/geometry.hpp"

namespace bhmap {

/// Jets of a map at a point: the coordinate seeds and the component jets,
/// both at the same truncation order.
struct MapJets {
  int domain_dim = 0;
  int target_dim = 0;
  int order = 0;
  std::vector<Jet> x;        // domain coordinate jets
  std::vector<Jet> phi;      // map component jets
  std::vector<double> x0;    // base point
  std::vector<double> y0;    // phi(x0)
};

MapJets map_jets(const SmoothMap& phi, std::span<const double> x0, int order);

/// h_ab(phi(x)), h^ab(phi(x)) and Gamma^a_bc(phi(x)) as jets in the domain
/// variables at the requested order (map jets must reach at least as far).
std::vector<Jet> target_metric_along(const MetricPatch& target,
                                     const MapJets& mj, int order);
std::vector<Jet> target_metric_inverse_along(const MetricPatch& target,
                                             const MapJets& mj, int order);
/// Layout: [(a*n + b)*n + c] = Gamma^a_bc along the map.
std::vector<Jet> target_christoffel_along(const MetricPatch& target,
                                          const MapJets& mj, int order);

/// Conformality factor candidate lambda^2 = |dphi|^2 / dim(target) as a jet
/// (for a horizontally weakly conformal map |dphi|^2 = dim(target) lambda^2).
Jet dilation_jets(const MetricPatch& domain, const MetricPatch& target,
                  const MapJets& mj, int order);

/// Tension field components as jets of the given order
/// (requires mj.order >= order + 2).
std::vector<Jet> tension_jets(const MetricPatch& domain,
                              const MetricPatch& target, const MapJets& mj,
                              int order);

/// Trace of the squared pulled-back connection on a section V of the
/// pulled-back tangent bundle: g^ij (nabla^phi_i nabla^phi_j
/// - Gamma^k_ij nabla^phi_k) V. Order drops by two.
std::vector<Jet> pullback_trace_laplacian(const MetricPatch& domain,
                                          const MetricPatch& target,
                                          const MapJets& mj,
                                          std::span<const Jet> V);

/// dphi as a target_dim x domain_dim matrix of values.
Eigen::MatrixXd differential(const SmoothMap& phi, std::span<const double> x);

/// sqrt(v^T h v) for a tangent vector in a chart with metric matrix h.
double norm_in_metric(const Eigen::MatrixXd& h, std::span<const double> v);

/// Horizontal weak conformality test: how far g^ij d_i phi^a d_j phi^b is
/// from lambda^2 h^ab. `residual` is the largest entry mismatch scaled by
/// max(1, lambda^2); `regular` flags points where dphi has not collapsed.
struct HwcReport {
  double lambda2 = 0.0;
  double residual = 0.0;
  bool regular = false;
};

HwcReport hwc_check(const MetricPatch& domain, const MetricPatch& target,
                    const SmoothMap& phi, std::span<const double> x);

/// e(phi) = |dphi|^2 / 2.
double energy_density(const MetricPatch& domain, const MetricPatch& target,
                      const SmoothMap& phi, std::span<const double> x);

std::vector<double> tension(const MetricPatch& domain,
                            const MetricPatch& target, const SmoothMap& phi,
                            std::span<const double> x);

/// Tension of the p-energy: |dphi|^(p-4) (|dphi|^2 tau
/// + (p-2)/2 dphi(grad |dphi|^2)). At points where dphi vanishes this is
/// zero for p >= 4 and undefined (std::domain_error) for p < 4.
std::vector<double> p_tension(const MetricPatch& domain,
                              const MetricPatch& target, const SmoothMap& phi,
                              std::span<const double> x, double p);

struct BitensionReport {
  std::vector<double> tau;        // tension components
  std::vector<double> tau2;       // bitension components
  std::vector<double> trace_part; // pulled-back-Laplacian contribution
  std::vector<double> curvature_part;
  double tau_norm = 0.0;          // |tau|_h at phi(x)
  double tau2_norm = 0.0;
  /// |tau2|_h / max(1, |trace part|_h, |curvature part|_h): thresholding
  /// this is stable across the catalog's scale ranges.
  double normalized = 0.0;
};

BitensionReport bitension(const MetricPatch& domain, const MetricPatch& target,
                          const SmoothMap& phi, std::span<const double> x);

/// Residual of the fourth-order equation satisfied by biharmonic conformal
/// diffeomorphisms (domain_dim == target_dim required; the map must be
/// regular at x). With v = grad(ln lambda):
///   r = dphi(trace nabla^2 v) - (Delta ln lambda) dphi(v)
///       + 2 dphi(grad |v|^2) + (2-n)|v|^2 dphi(v) + lambda^2 Ric(dphi(v)).
/// The bitension of such a map is (2-n) r, so r = 0 iff biharmonic when
/// n > 2 (in dimension 2 the map is harmonic and r need not vanish).
struct ConformalBiharmonicReport {
  std::vector<double> residual;  // target coordinates
  double residual_norm = 0.0;    // |r|_h at phi(x)
  double lambda = 0.0;           // conformal factor at x
  double frame_norm = 0.0;       // |r|_h / lambda
};

ConformalBiharmonicReport conformal_biharmonic_residual(
    const MetricPatch& domain, const MetricPatch& target, const SmoothMap& phi,
    std::span<const double> x);

}  // namespace bhmap
