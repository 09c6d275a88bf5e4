#include "bhmap/catalog.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bhmap {

namespace {

Jet radius_squared(std::span<const Jet> x) {
  Jet s(x[0].dim(), x[0].order(), 0.0);
  for (const Jet& xi : x) s += xi * xi;
  return s;
}

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

// x -> x/|x| in the chart y^a = x_{a+1} / (|x| + x_1) of the unit sphere.
SmoothMap radial_retraction(int m) {
  SmoothMap phi;
  phi.domain_dim = m;
  phi.target_dim = m - 1;
  for (int a = 0; a < m - 1; ++a) {
    phi.components.push_back([a](std::span<const Jet> x) {
      return x[a + 1] / (sqrt(radius_squared(x)) + x[0]);
    });
  }
  return phi;
}

// 4 / (1 + eps |x|^2)^2 * delta.
MetricPatch round_chart(int n, double eps) {
  return conformal_metric(n, [eps](std::span<const Jet> x) {
    const Jet u = 1.0 + eps * radius_squared(x);
    return 4.0 / (u * u);
  });
}

// delta / (x_n)^2 on the upper half-space.
MetricPatch half_space_metric(int n) {
  return conformal_metric(n, [n](std::span<const Jet> x) {
    return jet_reciprocal(x[n - 1] * x[n - 1]);
  });
}

// diag(1, 1, beta^2) with beta = c2 e^{-c1 x}(1 - e^{c1 x})^2.
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

double norm2_of(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return s;
}

std::vector<double> sample_direction(SampleRng& rng, int dim) {
  while (true) {
    std::vector<double> v(dim);
    for (int i = 0; i < dim; i += 2) {
      const double u1 = 1.0 - rng.uniform();  // (0, 1]
      const double u2 = rng.uniform();
      const double r = std::sqrt(-2.0 * std::log(u1));
      v[i] = r * std::cos(2.0 * std::numbers::pi * u2);
      if (i + 1 < dim) v[i + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
    }
    const double n2 = norm2_of(v);
    if (n2 > 1e-12) {
      const double inv = 1.0 / std::sqrt(n2);
      for (double& c : v) c *= inv;
      return v;
    }
  }
}

std::vector<double> sample_annulus(SampleRng& rng, int dim, double r0,
                                   double r1) {
  auto v = sample_direction(rng, dim);
  const double r = rng.uniform(r0, r1);
  for (double& c : v) c *= r;
  return v;
}

// Box [-1, 1]^{dim-1} x [h0, h1] (last coordinate is the height).
std::vector<double> sample_box_with_height(SampleRng& rng, int dim, double h0,
                                           double h1) {
  std::vector<double> v(dim);
  for (int i = 0; i + 1 < dim; ++i) v[i] = rng.uniform(-1.0, 1.0);
  v[dim - 1] = rng.uniform(h0, h1);
  return v;
}

void require_dim(const std::string& id, int n, int lo) {
  if (n < lo || n > kMaxJetDim) {
    throw std::invalid_argument("catalog entry '" + id + "': dimension " +
                                std::to_string(n) + " outside [" +
                                std::to_string(lo) + ", " +
                                std::to_string(kMaxJetDim) + "]");
  }
}

void require_sign(const std::string& id, double eps) {
  if (eps != 1.0 && eps != -1.0) {
    throw std::invalid_argument("catalog entry '" + id +
                                "': eps must be +1 or -1");
  }
}

CatalogEntry inversion_entry(CatalogParams p) {
  const int n = p.n;
  require_dim("inversion", n, 2);
  CatalogEntry e;
  e.id = "inversion";
  e.summary =
      "x -> x/|x|^2 between flat charts; biharmonic in dimensions 2 and 4, "
      "a morphism exactly in dimension 4";
  e.params = p;
  e.domain_dim = n;
  e.target_dim = n;
  e.domain = euclidean_metric(n);
  e.target = euclidean_metric(n);
  e.map = inversion_map(n);
  e.expected = {true, n == 2, n == 2 || n == 4, n == 4, n == 4};
  e.sample = [n](SampleRng& rng) { return sample_annulus(rng, n, 0.5, 2.0); };
  e.oracles["conformal_biharmonic"] = [n](std::span<const double> x) {
    const double s = norm2_of(x);
    std::vector<double> r(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) {
      r[a] = 8.0 * (4.0 - n) * x[a] / (s * s * s);
    }
    return r;
  };
  return e;
}

CatalogEntry radial_entry(CatalogParams p) {
  const int m = p.m;
  require_dim("radial", m, 3);
  CatalogEntry e;
  e.id = "radial";
  e.summary =
      "radial retraction x -> x/|x| onto a round sphere chart; a harmonic "
      "morphism for every m, quartic-flat only for m = 4";
  e.params = p;
  e.domain_dim = m;
  e.target_dim = m - 1;
  e.domain = euclidean_metric(m);
  e.target = round_chart(m - 1, 1.0);
  e.map = radial_retraction(m);
  e.expected = {true, true, true, true, m == 4};
  e.sample = [m](SampleRng& rng) {
    while (true) {
      auto v = sample_annulus(rng, m, 0.5, 2.0);
      if (v[0] >= -0.5 * std::sqrt(norm2_of(v))) return v;
    }
  };
  e.oracles["quartic_total"] = [m](std::span<const double> x) {
    const double s = norm2_of(x);
    const double d = m - 4.0;
    return std::vector<double>{4.0 * (m - 1.0) * d * d / (s * s * s * s)};
  };
  return e;
}

CatalogEntry round_identity_entry(const std::string& id, CatalogParams p) {
  const int n = p.n;
  require_dim(id, n, 2);
  require_sign(id, p.eps);
  const double eps = p.eps;
  CatalogEntry e;
  e.id = id;
  e.summary = eps > 0
                  ? "identity from a flat chart into the round sphere chart; "
                    "biharmonic in dimensions 2 and 4, never a morphism"
                  : "identity from a flat chart into the Poincare ball "
                    "metric; biharmonic in dimensions 2 and 4, never a "
                    "morphism";
  e.params = p;
  e.domain_dim = n;
  e.target_dim = n;
  e.domain = euclidean_metric(n);
  e.target = round_chart(n, eps);
  e.map = identity_map(n);
  e.expected = {true, n == 2, n == 2 || n == 4, n == 4, false};
  e.sample = [n](SampleRng& rng) { return sample_annulus(rng, n, 0.3, 0.8); };
  e.oracles["conformal_biharmonic"] = [n, eps](std::span<const double> x) {
    const double s = norm2_of(x);
    const double u = 1.0 + eps * s;
    std::vector<double> r(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) {
      r[a] = 8.0 * (4.0 - n) * (1.0 - eps * s) * x[a] / (u * u * u);
    }
    return r;
  };
  if (n == 4) {
    e.oracles["quartic_partial"] = [eps](std::span<const double> x) {
      const double s = norm2_of(x);
      const double u8 = std::pow(1.0 + eps * s, 8);
      return std::vector<double>{12288.0 * s * (eps - s) / u8};
    };
    e.oracles["quartic_total"] = [eps](std::span<const double> x) {
      const double u8 = std::pow(1.0 + eps * norm2_of(x), 8);
      return std::vector<double>{4096.0 / u8};
    };
  }
  return e;
}

CatalogEntry half_identity_entry(CatalogParams p) {
  const int n = p.n;
  require_dim("half_identity", n, 2);
  CatalogEntry e;
  e.id = "half_identity";
  e.summary =
      "identity from the flat half-space into the hyperbolic upper "
      "half-space; biharmonic in dimensions 2 and 4, never a morphism";
  e.params = p;
  e.domain_dim = n;
  e.target_dim = n;
  e.domain = euclidean_metric(n);
  e.target = half_space_metric(n);
  e.map = identity_map(n);
  e.expected = {true, n == 2, n == 2 || n == 4, n == 4, false};
  e.sample = [n](SampleRng& rng) {
    return sample_box_with_height(rng, n, 0.5, 3.0);
  };
  e.oracles["conformal_biharmonic"] = [n](std::span<const double> x) {
    const double t = x[x.size() - 1];
    std::vector<double> r(x.size(), 0.0);
    r[x.size() - 1] = 2.0 * (n - 4.0) / (t * t * t);
    return r;
  };
  return e;
}

CatalogEntry h4_flat_entry(CatalogParams p) {
  p.n = 4;
  CatalogEntry e;
  e.id = "h4_flat";
  e.summary =
      "identity from hyperbolic 4-space (half-space model) onto the flat "
      "half-space; conformal and 4-harmonic but not biharmonic";
  e.params = p;
  e.domain_dim = 4;
  e.target_dim = 4;
  e.domain = half_space_metric(4);
  e.target = euclidean_metric(4);
  e.map = identity_map(4);
  e.expected = {true, false, false, true, false};
  e.sample = [](SampleRng& rng) {
    return sample_box_with_height(rng, 4, 0.5, 3.0);
  };
  e.oracles["conformal_biharmonic"] = [](std::span<const double> x) {
    return std::vector<double>{0.0, 0.0, 0.0, -2.0 * x[3]};
  };
  e.oracles["quartic_total"] = [](std::span<const double> x) {
    return std::vector<double>{16.0 * std::pow(x[3], 4)};
  };
  return e;
}

CatalogEntry conf_flat_entry(CatalogParams p) {
  const int n = p.n;
  require_dim("conf_flat", n, 2);
  require_sign("conf_flat", p.eps);
  const double eps = p.eps;
  CatalogEntry e;
  e.id = "conf_flat";
  e.summary =
      "identity from a round conformal chart onto the flat chart; "
      "biharmonic only in dimension 2, 4-harmonic only in dimension 4";
  e.params = p;
  e.domain_dim = n;
  e.target_dim = n;
  e.domain = round_chart(n, eps);
  e.target = euclidean_metric(n);
  e.map = identity_map(n);
  e.expected = {true, n == 2, n == 2, n == 4, false};
  e.sample = [n](SampleRng& rng) { return sample_annulus(rng, n, 0.3, 0.8); };
  e.oracles["conformal_biharmonic"] = [n, eps](std::span<const double> x) {
    const double s = norm2_of(x);
    const double u = 1.0 + eps * s;
    std::vector<double> r(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) {
      r[a] = (2.0 + (4.0 - n) * eps * s) * (u / 2.0) * x[a];
    }
    return r;
  };
  return e;
}

CatalogEntry twisted_entry(CatalogParams p) {
  if (p.c1 == 0.0) {
    throw std::invalid_argument(
        "catalog entry 'twisted_projection': c1 must be nonzero");
  }
  if (p.c2 <= 0.0) {
    throw std::invalid_argument(
        "catalog entry 'twisted_projection': c2 must be positive");
  }
  const double c1 = p.c1;
  const double c2 = p.c2;
  CatalogEntry e;
  e.id = "twisted_projection";
  e.summary =
      "projection of a twisted product metric onto the flat plane; "
      "biharmonic but neither harmonic nor 4-harmonic";
  e.params = p;
  e.domain_dim = 3;
  e.target_dim = 2;
  e.domain = twisted_metric(c1, c2);
  e.target = euclidean_metric(2);
  e.map = plane_projection();
  e.expected = {true, false, true, false, false};
  e.sample = [c1](SampleRng& rng) {
    std::vector<double> v(3);
    v[0] = c1 > 0.0 ? rng.uniform(0.5, 3.0) : rng.uniform(-3.0, -0.5);
    v[1] = rng.uniform(-1.0, 1.0);
    v[2] = rng.uniform(-1.0, 1.0);
    return v;
  };
  // beta'/beta, computed in closed form.
  const auto slope = [c1](double x0) {
    const double e1 = std::exp(c1 * x0);
    return -c1 * (1.0 + e1) / (1.0 - e1);
  };
  e.oracles["log_slope"] = [slope](std::span<const double> x) {
    return std::vector<double>{slope(x[0])};
  };
  // Scalar reduction of biharmonicity: f'' + f f' = 0 for f = beta'/beta,
  // checked with one-dimensional jets of the warping profile.
  e.oracles["ode"] = [c1, c2](std::span<const double> x) {
    const Jet t = Jet::variable(1, 3, 0, x[0]);
    const Jet w = 1.0 - exp(c1 * t);
    const Jet beta = c2 * exp(-c1 * t) * w * w;
    const Jet f = beta.derivative(0) / beta.truncated(2);
    const Jet fp = f.derivative(0);
    return std::vector<double>{fp.derivative(0).value() +
                               f.value() * fp.value()};
  };
  e.oracles["quartic_total"] = [c1](std::span<const double>) {
    return std::vector<double>{std::pow(c1, 4)};
  };
  return e;
}

}  // namespace

std::vector<std::string> catalog_ids() {
  return {"inversion",     "radial",  "stereo_identity",
          "ball_identity", "half_identity", "h4_flat",
          "conf_flat",     "twisted_projection"};
}

bool catalog_has(const std::string& id) {
  for (const auto& known : catalog_ids()) {
    if (known == id) return true;
  }
  return false;
}

CatalogEntry make_entry(const std::string& id, const CatalogParams& params) {
  if (id == "inversion") return inversion_entry(params);
  if (id == "radial") return radial_entry(params);
  if (id == "stereo_identity") return round_identity_entry(id, params);
  if (id == "ball_identity") {
    CatalogParams p = params;
    p.eps = -1.0;
    return round_identity_entry(id, p);
  }
  if (id == "half_identity") return half_identity_entry(params);
  if (id == "h4_flat") return h4_flat_entry(params);
  if (id == "conf_flat") return conf_flat_entry(params);
  if (id == "twisted_projection") return twisted_entry(params);
  throw std::invalid_argument("unknown catalog entry '" + id + "'");
}

}  // namespace bhmap
