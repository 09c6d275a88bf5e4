#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <span>
#include <vector>

#include "bhmap/morphism.hpp"

using namespace bhmap;

namespace {

Jet radius_squared(std::span<const Jet> x) {
  Jet s(x[0].dim(), x[0].order(), 0.0);
  for (const Jet& xi : x) s += xi * xi;
  return s;
}

// x -> x / |x|^2.
SmoothMap inversion_map(int n) {
  SmoothMap phi;
  phi.domain_dim = n;
  phi.target_dim = n;
  for (int a = 0; a < n; ++a) {
    phi.components.push_back(
        [a](std::span<const Jet> x) { return x[a] / radius_squared(x); });
  }
  return phi;
}

// 4 / (1 + eps |x|^2)^2 * delta.
MetricPatch conformal_round(int n, double eps) {
  return conformal_metric(n, [eps](std::span<const Jet> x) {
    const Jet u = 1.0 + eps * radius_squared(x);
    return 4.0 / (u * u);
  });
}

// Upper half-space model: delta / (x_n)^2.
MetricPatch half_space_metric(int n) {
  return conformal_metric(n, [n](std::span<const Jet> x) {
    return jet_reciprocal(x[n - 1] * x[n - 1]);
  });
}

// Twisted product metric diag(1, 1, beta(x)^2) with
// beta = c2 e^{-c1 x} (1 - e^{c1 x})^2, and the (x, y) projection.
MetricPatch twisted_metric(double c1, double c2) {
  return diagonal_metric({constant_field(1.0), constant_field(1.0),
                          [c1, c2](std::span<const Jet> x) {
                            const Jet w = 1.0 - exp(c1 * x[0]);
                            const Jet b = c2 * exp(-c1 * x[0]) * w * w;
                            return b * b;
                          }});
}

SmoothMap plane_projection() {
  SmoothMap proj;
  proj.domain_dim = 3;
  proj.target_dim = 2;
  proj.components = {coordinate_field(0), coordinate_field(1)};
  return proj;
}

// Flat-target matrix certificate assembled independently of the library's
// term bookkeeping: A^ab = delta^ab D + (P + P^T)^ab + tau^a tau^b with
// P^ab = g^ij d_i phi^a d_j tau^b and D the domain Laplacian of lambda^2.
// Its squared Frobenius norm must reproduce the six-term quartic total.
double flat_matrix_invariant(const MetricPatch& domain,
                             const MetricPatch& target, const SmoothMap& phi,
                             std::span<const double> x) {
  const MapJets mj = map_jets(phi, x, 3);
  const int m = mj.domain_dim;
  const int n = mj.target_dim;
  const Jet lam2 = dilation_jets(domain, target, mj, 2);
  const double lap = laplacian(domain, mj.x, lam2).value();
  const auto tau1 = tension_jets(domain, target, mj, 1);
  const Eigen::MatrixXd g0 = metric_value(domain, mj.x0);
  const Eigen::MatrixXd ginv =
      g0.llt().solve(Eigen::MatrixXd::Identity(m, m));

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          p(a, b) += ginv(i, j) * mj.phi[a].derivative(i).value() *
                     tau1[b].derivative(j).value();
        }
      }
    }
  }
  Eigen::MatrixXd a_mat =
      lap * Eigen::MatrixXd::Identity(n, n) + p + p.transpose();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      a_mat(a, b) += tau1[a].value() * tau1[b].value();
    }
  }
  return a_mat.squaredNorm();
}

}  // namespace

TEST_CASE("inversion in dimension four: certificate point and verdict") {
  const MetricPatch flat = euclidean_metric(4);
  const SmoothMap phi = inversion_map(4);
  const std::vector<double> x = {1.0, 0.0, 0.0, 0.0};

  const Eigen::MatrixXd s = s_tensor(flat, flat, phi, x);
  CHECK(s(0, 0) == doctest::Approx(-24.0).epsilon(1e-12));
  for (int d = 1; d < 4; ++d) {
    CHECK(s(d, d) == doctest::Approx(-8.0).epsilon(1e-12));
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a != b) CHECK(std::abs(s(a, b)) < 1e-12);
    }
  }

  const auto q = quartic_residual(flat, flat, phi, x);
  CHECK(q.tau_norm2 == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(q.lap_lambda2 == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(q.pairing_div == doctest::Approx(-8.0).epsilon(1e-12));
  CHECK(q.s_norm2 == doctest::Approx(768.0).epsilon(1e-12));
  CHECK(q.terms[0] == doctest::Approx(256.0).epsilon(1e-11));
  CHECK(q.terms[1] == doctest::Approx(-256.0).epsilon(1e-11));
  CHECK(q.terms[2] == doctest::Approx(-256.0).epsilon(1e-11));
  CHECK(q.terms[3] == doctest::Approx(256.0).epsilon(1e-11));
  CHECK(q.terms[4] == doctest::Approx(-768.0).epsilon(1e-11));
  CHECK(q.terms[5] == doctest::Approx(768.0).epsilon(1e-11));
  CHECK(std::abs(q.total) < 1e-8);
  CHECK(q.normalized < 1e-10);
  CHECK(std::abs(q.trace_screen) < 1e-9);

  const auto four = four_harmonic_residual(flat, flat, phi, x);
  CHECK(four.norm < 1e-9);

  const auto report = morphism_point(flat, flat, phi, x, 1e-8);
  CHECK(report.verdict.regular);
  CHECK(report.verdict.hwc);
  CHECK_FALSE(report.verdict.harmonic);
  CHECK(report.verdict.biharmonic);
  CHECK(report.verdict.four_harmonic);
  CHECK(report.verdict.morphism);
}

TEST_CASE("inversion: fourth-order field across dimensions") {
  // lambda^2 tau + dphi(grad lambda^2) = (8 - 2n) x / |x|^8, and the
  // 4-energy tension is n times it for any map with our lambda^2 convention.
  for (int n : {2, 3, 5}) {
    const MetricPatch flat = euclidean_metric(n);
    const SmoothMap phi = inversion_map(n);
    std::vector<double> x(n, 0.0);
    x[0] = 0.8;
    x[1] = -0.5;
    if (n > 2) x[n - 1] = 0.4;
    double s = 0.0;
    for (double xi : x) s += xi * xi;
    const double scale = (8.0 - 2.0 * n) / (s * s * s * s);

    const auto four = four_harmonic_residual(flat, flat, phi, x);
    const auto tau4 = p_tension(flat, flat, phi, x, 4.0);
    for (int a = 0; a < n; ++a) {
      CHECK(four.residual[a] == doctest::Approx(scale * x[a]).epsilon(1e-11));
      CHECK(tau4[a] ==
            doctest::Approx(n * four.residual[a]).epsilon(1e-12));
    }
    if (n == 4) {
      CHECK(four.normalized < 1e-12);
    } else {
      CHECK(four.normalized > 1e-3);
    }
  }

  // In dimension two the map is harmonic, so only the n (D lambda^2)^2 term
  // of the quartic invariant survives: total = 2 (16/|x|^6)^2... with
  // D lambda^2 = 16 / |x|^6 at n = 2.
  {
    const MetricPatch flat = euclidean_metric(2);
    const SmoothMap phi = inversion_map(2);
    const std::vector<double> x = {0.7, -0.5};
    const double s = 0.49 + 0.25;
    const auto q = quartic_residual(flat, flat, phi, x);
    const double lap = 16.0 / (s * s * s);
    CHECK(q.lap_lambda2 == doctest::Approx(lap).epsilon(1e-12));
    CHECK(q.terms[0] == doctest::Approx(0.0));
    CHECK(std::abs(q.s_norm2) < 1e-10);
    CHECK(q.total == doctest::Approx(2.0 * lap * lap).epsilon(1e-10));
  }
}

TEST_CASE("trace screen anchors") {
  SUBCASE("inversion, dimension four: identically zero") {
    const MetricPatch flat = euclidean_metric(4);
    const SmoothMap phi = inversion_map(4);
    for (std::vector<double> x :
         {std::vector<double>{0.6, 0.8, 0.0, 0.0},
          std::vector<double>{1.2, -0.4, 0.3, 0.9}}) {
      CHECK(std::abs(trace_screen(flat, flat, phi, x)) < 1e-9);
    }
  }

  SUBCASE("flat ball to Poincare metric at the origin") {
    const MetricPatch flat = euclidean_metric(4);
    const MetricPatch ball = conformal_round(4, -1.0);
    const std::vector<double> x = {0.0, 0.0, 0.0, 0.0};
    CHECK(trace_screen(flat, ball, identity_map(4), x) ==
          doctest::Approx(128.0).epsilon(1e-10));
  }

  SUBCASE("flat half-space to hyperbolic metric at height one") {
    const MetricPatch flat = euclidean_metric(4);
    const MetricPatch half = half_space_metric(4);
    const std::vector<double> x = {0.2, -0.3, 0.4, 1.0};
    CHECK(trace_screen(flat, half, identity_map(4), x) ==
          doctest::Approx(8.0).epsilon(1e-10));
  }
}

TEST_CASE("round-chart identities: quartic closed forms") {
  // For the identity (R^4, delta) -> (R^4, 4/(1 + eps|x|^2)^2 delta), with
  // u = 1 + eps |x|^2:
  //   |S|^2        = 4096 (1 - 3 eps s + 3 s^2) / u^8
  //   partial sum  = 12288 s (eps - s) / u^8
  //   total        = 4096 / u^8            (both signs of eps)
  const MetricPatch flat = euclidean_metric(4);
  const SmoothMap id = identity_map(4);
  const std::vector<double> x = {0.3, -0.2, 0.4, 0.1};
  const double s = 0.09 + 0.04 + 0.16 + 0.01;

  for (double eps : {1.0, -1.0}) {
    CAPTURE(eps);
    const MetricPatch round = conformal_round(4, eps);
    const double u = 1.0 + eps * s;
    const double u8 = std::pow(u, 8);

    const auto q = quartic_residual(flat, round, id, x);
    CHECK(q.s_norm2 ==
          doctest::Approx(4096.0 * (1.0 - 3.0 * eps * s + 3.0 * s * s) / u8)
              .epsilon(1e-10));
    CHECK(q.partial_sum ==
          doctest::Approx(12288.0 * s * (eps - s) / u8).epsilon(1e-10));
    CHECK(q.total == doctest::Approx(4096.0 / u8).epsilon(1e-10));

    const auto report = morphism_point(flat, round, id, x, 1e-8);
    CHECK(report.verdict.hwc);
    CHECK_FALSE(report.verdict.harmonic);
    CHECK(report.verdict.biharmonic);
    CHECK(report.verdict.four_harmonic);
    CHECK_FALSE(report.verdict.morphism);
  }

  SUBCASE("published sample of the five-term partial sum") {
    const MetricPatch sphere = conformal_round(4, 1.0);
    const std::vector<double> p = {0.5, 0.0, 0.0, 0.0};
    const double u8 = std::pow(1.25, 8);
    const auto q = quartic_residual(flat, sphere, id, p);
    // 16^3 |x|^2 (1 + 2 eps - 3 eps |x|^2) / u^8 at eps = +1.
    const double closed = 4096.0 * 0.25 * (1.0 + 2.0 - 3.0 * 0.25) / u8;
    CHECK(q.partial_sum == doctest::Approx(closed).epsilon(1e-12));
    CHECK(q.partial_sum == doctest::Approx(386.5472).epsilon(1e-6));
    CHECK(q.total == doctest::Approx(4096.0 / u8).epsilon(1e-12));
  }
}

TEST_CASE("hyperbolic half-space to flat: conformal but not biharmonic") {
  const int n = 4;
  const MetricPatch hyper = half_space_metric(n);
  const MetricPatch flat = euclidean_metric(n);
  const SmoothMap id = identity_map(n);
  const std::vector<double> x = {0.3, -0.2, 0.5, 1.5};
  const double t = x[3];

  const auto four = four_harmonic_residual(hyper, flat, id, x);
  CHECK(four.norm < 1e-12);

  const auto q = quartic_residual(hyper, flat, id, x);
  CHECK(q.lap_lambda2 == doctest::Approx(-2.0 * t * t).epsilon(1e-12));
  CHECK(q.tau_norm2 == doctest::Approx(4.0 * t * t).epsilon(1e-12));
  CHECK(q.total == doctest::Approx(16.0 * std::pow(t, 4)).epsilon(1e-11));
  CHECK(q.trace_screen == doctest::Approx(-8.0 * t * t).epsilon(1e-11));

  const auto report = morphism_point(hyper, flat, id, x, 1e-8);
  CHECK(report.verdict.hwc);
  CHECK_FALSE(report.verdict.harmonic);
  CHECK_FALSE(report.verdict.biharmonic);
  CHECK(report.verdict.four_harmonic);
  CHECK_FALSE(report.verdict.morphism);
}

TEST_CASE("flat-target matrix certificate equals the quartic total") {
  SUBCASE("inversion, dimension three") {
    const MetricPatch flat = euclidean_metric(3);
    const SmoothMap phi = inversion_map(3);
    const std::vector<double> x = {0.8, 0.2, -0.4};
    const double total = quartic_residual(flat, flat, phi, x).total;
    CHECK(flat_matrix_invariant(flat, flat, phi, x) ==
          doctest::Approx(total).epsilon(1e-10));
    CHECK(total > 1.0);  // not a morphism in odd dimensions
  }

  SUBCASE("hyperbolic half-space to flat") {
    const MetricPatch hyper = half_space_metric(4);
    const MetricPatch flat = euclidean_metric(4);
    const std::vector<double> x = {0.1, 0.7, -0.3, 2.0};
    const double total = quartic_residual(hyper, flat, identity_map(4), x).total;
    CHECK(flat_matrix_invariant(hyper, flat, identity_map(4), x) ==
          doctest::Approx(total).epsilon(1e-10));
    CHECK(total == doctest::Approx(256.0).epsilon(1e-11));  // 16 t^4
  }

  SUBCASE("twisted projection") {
    const MetricPatch domain = twisted_metric(1.0, 1.0);
    const MetricPatch flat2 = euclidean_metric(2);
    const SmoothMap proj = plane_projection();
    const std::vector<double> x = {1.0, 0.3, -0.2};
    const double total = quartic_residual(domain, flat2, proj, x).total;
    CHECK(flat_matrix_invariant(domain, flat2, proj, x) ==
          doctest::Approx(total).epsilon(1e-10));
  }
}

TEST_CASE("twisted projection: biharmonic yet not a morphism") {
  // With beta = c2 e^{-c1 x}(1 - e^{c1 x})^2 the projection satisfies
  // f^2 + 2 f' = c1^2 for f = beta'/beta, which makes the trace screen c1^2
  // and the quartic total c1^4 — nonzero, so the morphism verdict fails
  // even though the map is biharmonic and horizontally conformal.
  struct Params {
    double c1, c2, x0;
  };
  for (const Params& p : {Params{1.0, 1.0, 1.0}, Params{2.0, 0.5, 0.8}}) {
    CAPTURE(p.c1);
    const MetricPatch domain = twisted_metric(p.c1, p.c2);
    const MetricPatch flat2 = euclidean_metric(2);
    const SmoothMap proj = plane_projection();
    const std::vector<double> x = {p.x0, 0.3, -0.2};

    const auto q = quartic_residual(domain, flat2, proj, x);
    CHECK(q.trace_screen == doctest::Approx(p.c1 * p.c1).epsilon(1e-11));
    CHECK(q.total ==
          doctest::Approx(std::pow(p.c1, 4)).epsilon(1e-11));

    const auto report = morphism_point(domain, flat2, proj, x, 1e-8);
    CHECK(report.verdict.hwc);
    CHECK_FALSE(report.verdict.harmonic);
    CHECK(report.verdict.biharmonic);
    CHECK_FALSE(report.verdict.four_harmonic);
    CHECK(report.four_harmonic.normalized > 0.1);
    CHECK_FALSE(report.verdict.morphism);
  }
}
