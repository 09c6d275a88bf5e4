#pragma once

// Frame machinery for submersive maps: an orthonormal jet frame split into
// vertical fields (spanning the kernel of dphi) and horizontal fields (its
// metric complement), the mean curvatures of the two distributions, the
// fundamental tensors restricted to either distribution, and the structure
// identity that reassembles the tension field from frame data alone:
//
//   tau = dphi((2 - n) grad^H ln(lambda) - (m - n) mu).
//
// Everything is carried out in jet arithmetic, so frame fields can be
// differentiated exactly afterwards.

#include <span>
#include <vector>

#include "bhmap/fields.hpp"

namespace bhmap {

struct SubmersionFrame {
  int domain_dim = 0;      // m
  int horizontal_dim = 0;  // n = rank of dphi (target dimension)
  int order = 0;
  std::vector<Jet> x;      // coordinate jets the frame fields live on
  std::vector<double> x0;
  std::vector<std::vector<Jet>> vertical;    // m - n orthonormal fields
  std::vector<std::vector<Jet>> horizontal;  // n orthonormal fields
};

/// Build the adapted frame at x. Throws std::domain_error when dphi does not
/// have full rank there (the map fails to be submersive at the point).
SubmersionFrame submersion_frame(const MetricPatch& domain,
                                 const SmoothMap& phi,
                                 std::span<const double> x, int order);

/// g_ij u^i v^j as a jet (u, v at equal order; the metric is truncated to
/// match).
Jet metric_pairing(const MetricPatch& domain, std::span<const Jet> x,
                   std::span<const Jet> u, std::span<const Jet> v);

/// Projections of a jet field onto the frame's distributions (frame fields
/// are truncated to the field's order).
std::vector<Jet> vertical_part(const MetricPatch& domain,
                               const SubmersionFrame& frame,
                               std::span<const Jet> field);
std::vector<Jet> horizontal_part(const MetricPatch& domain,
                                 const SubmersionFrame& frame,
                                 std::span<const Jet> field);

/// (nabla_E F)^k = E^i d_i F^k + Gamma^k_ij E^i F^j; the order drops by one.
std::vector<Jet> covariant_derivative(const MetricPatch& domain,
                                      std::span<const Jet> x,
                                      std::span<const Jet> direction,
                                      std::span<const Jet> field);

/// mu: mean curvature of the fibers, the averaged horizontal part of
/// nabla_{e_s} e_s over the vertical frame (zero vector when m == n).
std::vector<double> fiber_mean_curvature(const MetricPatch& domain,
                                         const SmoothMap& phi,
                                         std::span<const double> x);

/// nu: the averaged vertical part of nabla_{e_i} e_i over the horizontal
/// frame — the mean curvature of the horizontal distribution.
std::vector<double> horizontal_mean_curvature(const MetricPatch& domain,
                                              const SmoothMap& phi,
                                              std::span<const double> x);

/// Fundamental tensors, evaluated pointwise on jet fields expressed in the
/// frame's coordinates (both are tensorial because the projected argument
/// lies in the complementary distribution):
///   fundamental_a(E, F) = (nabla_{E^H} F^H)^V   (integrability obstruction)
///   fundamental_b(E, F) = (nabla_{E^V} F^V)^H   (fiber second fundamental form)
std::vector<double> fundamental_a(const MetricPatch& domain,
                                  const SubmersionFrame& frame,
                                  std::span<const Jet> e,
                                  std::span<const Jet> f);
std::vector<double> fundamental_b(const MetricPatch& domain,
                                  const SubmersionFrame& frame,
                                  std::span<const Jet> e,
                                  std::span<const Jet> f);

/// Tension reassembled from frame data through the structure identity; for
/// a horizontally conformal submersive map this must agree with tension().
std::vector<double> tension_via_frame(const MetricPatch& domain,
                                      const MetricPatch& target,
                                      const SmoothMap& phi,
                                      std::span<const double> x);

}  // namespace bhmap
