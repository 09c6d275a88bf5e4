#pragma once

// Built-in chart families with known behaviour. Each entry packages the
// domain and target metrics, the map, the verdicts it is expected to earn,
// a deterministic sampler for a region safely inside the chart, and — where
// a formula is available — closed-form reference values ("oracles") to pit
// the jet engine against.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bhmap/geometry.hpp"

namespace bhmap {

/// Deterministic sampling stream: equal seeds yield equal points on every
/// platform (the raw 64-bit output is reduced to a double directly, without
/// going through distribution objects).
struct SampleRng {
  std::mt19937_64 gen;
  explicit SampleRng(std::uint64_t seed) : gen(seed) {}
  double uniform() { return double(gen() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

/// Union of the parameters used across the catalog; each entry validates and
/// reads only the fields that concern it (n for identity-type charts, m for
/// the radial retraction, eps for the round-chart sign, c1/c2 for the
/// twisted product).
struct CatalogParams {
  int n = 4;
  int m = 4;
  double eps = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
};

struct ExpectedVerdicts {
  bool hwc = false;
  bool harmonic = false;
  bool biharmonic = false;
  bool four_harmonic = false;
  bool morphism = false;
};

/// Closed-form reference evaluated at a sample point. Keys in use:
///   conformal_biharmonic — expected residual vector of
///                          conformal_biharmonic_residual()
///   quartic_partial      — expected five-term partial sum of the quartic
///   quartic_total        — expected six-term quartic total
///   ode                  — residual of the scalar reduction of the
///                          biharmonicity equation; expected ~ 0
///   log_slope            — expected first tension component
using CatalogOracle =
    std::function<std::vector<double>(std::span<const double>)>;

struct CatalogEntry {
  std::string id;
  std::string summary;
  CatalogParams params;  // validated copy
  int domain_dim = 0;
  int target_dim = 0;
  MetricPatch domain;
  MetricPatch target;
  SmoothMap map;
  ExpectedVerdicts expected;
  std::function<std::vector<double>(SampleRng&)> sample;
  std::map<std::string, CatalogOracle> oracles;
};

/// Entry ids in their fixed listing order.
std::vector<std::string> catalog_ids();
bool catalog_has(const std::string& id);

/// Build an entry. Throws std::invalid_argument for an unknown id or
/// parameters outside the entry's valid range.
CatalogEntry make_entry(const std::string& id, const CatalogParams& params);

}  // namespace bhmap
