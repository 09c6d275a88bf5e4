#pragma once

// Batch evaluation of catalog entries and serialization of the results.
// `run_check` samples one entry and aggregates the pointwise certificates
// into observed verdicts; `run_sweep` repeats a check across a dimension
// range. Renderers produce either a human-readable table or JSON whose byte
// content depends only on the run configuration (fixed key order, fixed
// %.17g number formatting), so identical runs diff as identical files.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bhmap/catalog.hpp"
#include "bhmap/morphism.hpp"

namespace bhmap {

struct RunConfig {
  std::string entry;
  CatalogParams params;
  int samples = 20;
  std::uint64_t seed = 2024;
  double tol = 1e-8;         // zero-detection threshold for verdicts
  double oracle_tol = 1e-6;  // max relative error against closed forms
};

/// One sampled point, reduced to the scalars worth reporting.
struct PointRecord {
  std::vector<double> x;
  double lambda2 = 0.0;
  double hwc_residual = 0.0;
  double tau_norm = 0.0;
  double harmonic_normalized = 0.0;
  double tau2_norm = 0.0;
  double bitension_normalized = 0.0;
  double four_harmonic_normalized = 0.0;
  double quartic_total = 0.0;
  double quartic_normalized = 0.0;
  double trace_screen = 0.0;
  std::map<std::string, double> oracle_errors;
};

/// Worst-case normalized residual per condition over all sampled points.
struct CheckAggregates {
  double hwc = 0.0;
  double harmonic = 0.0;
  double biharmonic = 0.0;
  double four_harmonic = 0.0;
  double quartic = 0.0;
  double trace_screen = 0.0;
};

struct CheckReport {
  RunConfig config;  // params echoed back after validation
  std::string summary;
  int domain_dim = 0;
  int target_dim = 0;
  bool all_regular = true;
  ExpectedVerdicts expected;
  ExpectedVerdicts observed;
  CheckAggregates aggregates;
  std::map<std::string, double> oracle_errors;  // max over points, per key
  std::vector<PointRecord> points;
  bool verdicts_match = false;
  bool oracles_pass = true;
  bool match = false;  // verdicts_match && oracles_pass
};

CheckReport run_check(const RunConfig& config);

struct SweepRow {
  int dim = 0;
  ExpectedVerdicts expected;
  ExpectedVerdicts observed;
  CheckAggregates aggregates;
  double max_oracle_error = 0.0;
  bool match = false;
};

struct SweepReport {
  RunConfig config;
  char varied = 'n';  // which parameter the sweep varies ('n' or 'm')
  std::vector<SweepRow> rows;
  bool all_match = false;
};

/// Which dimension parameter a sweep varies for the entry: 'n', 'm', or 0
/// when the entry has no dimension parameter (h4_flat, twisted_projection).
char sweep_parameter(const std::string& id);

/// Run the entry across the given dimensions. Throws std::invalid_argument
/// when the entry has no dimension parameter or a dimension is out of range.
SweepReport run_sweep(const RunConfig& config, const std::vector<int>& dims);

/// Parse "4", "2,4,5" or "2..6" into a dimension list (strictly increasing
/// ranges; throws std::invalid_argument on malformed input).
std::vector<int> parse_dims(const std::string& text);

std::string render_text(const CheckReport& report);
std::string render_json(const CheckReport& report);
std::string render_text(const SweepReport& report);
std::string render_json(const SweepReport& report);

/// Catalog listing for the CLI.
std::string render_catalog_text();
std::string render_catalog_json();

}  // namespace bhmap
