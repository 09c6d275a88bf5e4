#pragma once

// Pointwise certificates for when a horizontally weakly conformal map also
// pulls local biharmonic functions back to biharmonic functions. That holds
// exactly when four conditions vanish together: the conformality defect, the
// bitension, the field lambda^2 tau + dphi(grad lambda^2), and a quartic
// scalar invariant built from |tau|, Delta lambda^2, the pairing one-form
// <dphi, tau> and a symmetrized gradient coupling S. This module evaluates
// each condition numerically and aggregates the verdicts.

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bhmap/fields.hpp"

namespace bhmap {

/// S^ab = g^ij d_i phi^a d_j tau^b + lambda^2 h^ac Gamma^b_dc(phi) tau^d,
/// symmetrized by adding the transpose.
Eigen::MatrixXd s_tensor(const MetricPatch& domain, const MetricPatch& target,
                         const SmoothMap& phi, std::span<const double> x);

/// lambda^2 tau + dphi(grad lambda^2). For a horizontally weakly conformal
/// map this is 1/n times the tension of the 4-energy, so it vanishes
/// exactly on 4-harmonic maps.
struct FourHarmonicReport {
  std::vector<double> residual;
  double norm = 0.0;        // |residual|_h at phi(x)
  double normalized = 0.0;  // norm / max(1, |lambda^2 tau|_h, |dphi grad|_h)
};

FourHarmonicReport four_harmonic_residual(const MetricPatch& domain,
                                          const MetricPatch& target,
                                          const SmoothMap& phi,
                                          std::span<const double> x);

/// The quartic invariant, reported term by term (n = target dimension,
/// D = Laplace-Beltrami of lambda^2, w = <dphi, tau> pairing one-form):
///   terms[0] = |tau|^4            terms[1] = -2 D |tau|^2
///   terms[2] = 4 D div w          terms[3] = n D^2
///   terms[4] = 2 w(grad |tau|^2)  terms[5] = |S|^2
/// `partial_sum` adds the first five (the part that has a closed form for
/// several catalog families); `total` adds all six and is the quantity that
/// must vanish for a morphism.
struct QuarticReport {
  std::array<double, 6> terms{};
  double partial_sum = 0.0;
  double total = 0.0;
  double normalized = 0.0;    // |total| / max(1, largest |term|)
  double lap_lambda2 = 0.0;   // D
  double tau_norm2 = 0.0;     // |tau|^2
  double pairing_div = 0.0;   // div w
  double s_norm2 = 0.0;       // |S|^2
  double trace_screen = 0.0;  // n D + 2 div w - |tau|^2
};

QuarticReport quartic_residual(const MetricPatch& domain,
                               const MetricPatch& target, const SmoothMap& phi,
                               std::span<const double> x);

/// The h-trace of the flat-target matrix certificate: a cheap necessary
/// condition (n D + 2 div<dphi,tau> - |tau|^2) that must vanish for any
/// morphism.
double trace_screen(const MetricPatch& domain, const MetricPatch& target,
                    const SmoothMap& phi, std::span<const double> x);

struct MorphismVerdict {
  bool regular = false;
  bool hwc = false;
  bool harmonic = false;
  bool biharmonic = false;
  bool four_harmonic = false;
  bool morphism = false;
};

struct MorphismPointReport {
  HwcReport hwc;
  BitensionReport bitension;
  FourHarmonicReport four_harmonic;
  QuarticReport quartic;
  double harmonic_normalized = 0.0;  // |tau|_h / max(1, n lambda^2)
  MorphismVerdict verdict;
};

/// Evaluate every certificate at one point; `tol` is the zero-detection
/// threshold applied to each normalized residual.
MorphismPointReport morphism_point(const MetricPatch& domain,
                                   const MetricPatch& target,
                                   const SmoothMap& phi,
                                   std::span<const double> x, double tol);

}  // namespace bhmap
