#include "bhmap/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bhmap/fields.hpp"

namespace bhmap {

namespace {

// ---------------------------------------------------------------------------
// Formatting primitives. JSON numbers always go through fmt17 so that two
// runs with the same configuration produce byte-identical documents.
// ---------------------------------------------------------------------------

std::string fmt17(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

const char* yn(bool b) { return b ? "yes" : "no"; }

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += char(c);
        }
    }
  }
  out += '"';
  return out;
}

void append_verdicts(std::string& out, const ExpectedVerdicts& v) {
  out += "{\"hwc\":";
  out += v.hwc ? "true" : "false";
  out += ",\"harmonic\":";
  out += v.harmonic ? "true" : "false";
  out += ",\"biharmonic\":";
  out += v.biharmonic ? "true" : "false";
  out += ",\"four_harmonic\":";
  out += v.four_harmonic ? "true" : "false";
  out += ",\"morphism\":";
  out += v.morphism ? "true" : "false";
  out += "}";
}

void append_aggregates(std::string& out, const CheckAggregates& a) {
  out += "{\"hwc\":" + fmt17(a.hwc);
  out += ",\"harmonic\":" + fmt17(a.harmonic);
  out += ",\"biharmonic\":" + fmt17(a.biharmonic);
  out += ",\"four_harmonic\":" + fmt17(a.four_harmonic);
  out += ",\"quartic\":" + fmt17(a.quartic);
  out += ",\"trace_screen\":" + fmt17(a.trace_screen);
  out += "}";
}

void append_params(std::string& out, const CatalogParams& p) {
  out += "{\"n\":" + std::to_string(p.n);
  out += ",\"m\":" + std::to_string(p.m);
  out += ",\"eps\":" + fmt17(p.eps);
  out += ",\"c1\":" + fmt17(p.c1);
  out += ",\"c2\":" + fmt17(p.c2);
  out += "}";
}

void append_error_map(std::string& out,
                      const std::map<std::string, double>& errors) {
  out += "{";
  bool first = true;
  for (const auto& [key, value] : errors) {
    if (!first) out += ",";
    first = false;
    out += json_string(key) + ":" + fmt17(value);
  }
  out += "}";
}

/// Which of the catalog parameters are meaningful for the entry, rendered
/// for the human-readable output.
std::string param_note(const std::string& id, const CatalogParams& p) {
  if (id == "radial") return "m=" + std::to_string(p.m);
  if (id == "stereo_identity" || id == "ball_identity" || id == "conf_flat")
    return "n=" + std::to_string(p.n) +
           (p.eps > 0 ? " eps=+1" : " eps=-1");
  if (id == "twisted_projection")
    return "c1=" + fmtg(p.c1) + " c2=" + fmtg(p.c2);
  if (id == "h4_flat") return "n=4 (fixed)";
  return "n=" + std::to_string(p.n);
}

/// Engine-side counterpart of a closed-form oracle at one sampled point.
/// The "ode" key is a self-contained residual, so the engine side is zero.
std::vector<double> engine_value(const std::string& key,
                                 const CatalogEntry& entry,
                                 const MorphismPointReport& mp,
                                 std::span<const double> x) {
  if (key == "conformal_biharmonic") {
    return conformal_biharmonic_residual(entry.domain, entry.target, entry.map,
                                         x)
        .residual;
  }
  if (key == "quartic_partial") return {mp.quartic.partial_sum};
  if (key == "quartic_total") return {mp.quartic.total};
  if (key == "ode") return {0.0};
  if (key == "log_slope") return {mp.bitension.tau[0]};
  throw std::logic_error("no engine counterpart for oracle key: " + key);
}

double relative_error(std::span<const double> engine,
                      std::span<const double> oracle) {
  if (engine.size() != oracle.size())
    throw std::logic_error("oracle/engine dimension mismatch");
  double diff = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < engine.size(); ++i) {
    diff = std::max(diff, std::abs(engine[i] - oracle[i]));
    scale = std::max(scale, std::abs(oracle[i]));
  }
  return diff / scale;
}

}  // namespace

// ---------------------------------------------------------------------------
// Check runs
// ---------------------------------------------------------------------------

CheckReport run_check(const RunConfig& config) {
  if (config.samples < 1)
    throw std::invalid_argument("samples must be at least 1");
  const CatalogEntry entry = make_entry(config.entry, config.params);

  CheckReport report;
  report.config = config;
  report.config.params = entry.params;  // echo back the validated copy
  report.summary = entry.summary;
  report.domain_dim = entry.domain_dim;
  report.target_dim = entry.target_dim;
  report.expected = entry.expected;

  SampleRng rng(config.seed);
  for (int k = 0; k < config.samples; ++k) {
    const std::vector<double> x = entry.sample(rng);
    const MorphismPointReport mp =
        morphism_point(entry.domain, entry.target, entry.map, x, config.tol);

    PointRecord pr;
    pr.x = x;
    pr.lambda2 = mp.hwc.lambda2;
    pr.hwc_residual = mp.hwc.residual;
    pr.tau_norm = mp.bitension.tau_norm;
    pr.harmonic_normalized = mp.harmonic_normalized;
    pr.tau2_norm = mp.bitension.tau2_norm;
    pr.bitension_normalized = mp.bitension.normalized;
    pr.four_harmonic_normalized = mp.four_harmonic.normalized;
    pr.quartic_total = mp.quartic.total;
    pr.quartic_normalized = mp.quartic.normalized;
    pr.trace_screen = mp.quartic.trace_screen;

    report.all_regular = report.all_regular && mp.verdict.regular;
    auto& agg = report.aggregates;
    agg.hwc = std::max(agg.hwc, mp.hwc.residual);
    agg.harmonic = std::max(agg.harmonic, mp.harmonic_normalized);
    agg.biharmonic = std::max(agg.biharmonic, mp.bitension.normalized);
    agg.four_harmonic =
        std::max(agg.four_harmonic, mp.four_harmonic.normalized);
    agg.quartic = std::max(agg.quartic, mp.quartic.normalized);
    agg.trace_screen =
        std::max(agg.trace_screen, std::abs(mp.quartic.trace_screen));

    for (const auto& [key, oracle] : entry.oracles) {
      const std::vector<double> reference = oracle(x);
      const std::vector<double> engine = engine_value(key, entry, mp, x);
      const double err = relative_error(engine, reference);
      pr.oracle_errors[key] = err;
      auto [it, inserted] = report.oracle_errors.try_emplace(key, err);
      if (!inserted) it->second = std::max(it->second, err);
    }
    report.points.push_back(std::move(pr));
  }

  const auto& agg = report.aggregates;
  auto& obs = report.observed;
  obs.hwc = report.all_regular && agg.hwc < config.tol;
  obs.harmonic = agg.harmonic < config.tol;
  obs.biharmonic = agg.biharmonic < config.tol;
  obs.four_harmonic = agg.four_harmonic < config.tol;
  obs.morphism = obs.hwc && obs.biharmonic && obs.four_harmonic &&
                 agg.quartic < config.tol;

  const auto& exp = report.expected;
  report.verdicts_match =
      obs.hwc == exp.hwc && obs.harmonic == exp.harmonic &&
      obs.biharmonic == exp.biharmonic &&
      obs.four_harmonic == exp.four_harmonic && obs.morphism == exp.morphism;
  for (const auto& [key, err] : report.oracle_errors)
    report.oracles_pass = report.oracles_pass && err < config.oracle_tol;
  report.match = report.verdicts_match && report.oracles_pass;
  return report;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

char sweep_parameter(const std::string& id) {
  if (id == "radial") return 'm';
  if (id == "h4_flat" || id == "twisted_projection") return 0;
  if (catalog_has(id)) return 'n';
  throw std::invalid_argument("unknown catalog entry: " + id);
}

SweepReport run_sweep(const RunConfig& config, const std::vector<int>& dims) {
  const char varied = sweep_parameter(config.entry);
  if (varied == 0)
    throw std::invalid_argument("entry '" + config.entry +
                                "' has fixed dimensions and cannot be swept");
  if (dims.empty()) throw std::invalid_argument("empty dimension list");

  SweepReport sweep;
  sweep.config = config;
  sweep.varied = varied;
  sweep.all_match = true;
  for (int d : dims) {
    RunConfig point_config = config;
    if (varied == 'n')
      point_config.params.n = d;
    else
      point_config.params.m = d;
    const CheckReport check = run_check(point_config);

    SweepRow row;
    row.dim = d;
    row.expected = check.expected;
    row.observed = check.observed;
    row.aggregates = check.aggregates;
    for (const auto& [key, err] : check.oracle_errors)
      row.max_oracle_error = std::max(row.max_oracle_error, err);
    row.match = check.match;
    sweep.all_match = sweep.all_match && row.match;
    sweep.rows.push_back(row);
  }
  return sweep;
}

std::vector<int> parse_dims(const std::string& text) {
  const auto parse_int = [](const std::string& token) {
    if (token.empty()) throw std::invalid_argument("empty dimension token");
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad dimension token: '" + token + "'");
    }
    if (used != token.size())
      throw std::invalid_argument("bad dimension token: '" + token + "'");
    return value;
  };

  const auto range_pos = text.find("..");
  if (range_pos != std::string::npos) {
    const int lo = parse_int(text.substr(0, range_pos));
    const int hi = parse_int(text.substr(range_pos + 2));
    if (lo > hi)
      throw std::invalid_argument("empty dimension range: '" + text + "'");
    std::vector<int> dims;
    for (int d = lo; d <= hi; ++d) dims.push_back(d);
    return dims;
  }

  std::vector<int> dims;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string::npos ? text.size() : comma;
    dims.push_back(parse_int(text.substr(start, end - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return dims;
}

// ---------------------------------------------------------------------------
// Renderers
// ---------------------------------------------------------------------------

std::string render_text(const CheckReport& report) {
  std::string out;
  out += "entry: " + report.config.entry + "\n";
  out += "  " + report.summary + "\n";
  out += "params: " + param_note(report.config.entry, report.config.params);
  out += "   map: " + std::to_string(report.domain_dim) + "d -> " +
         std::to_string(report.target_dim) + "d\n";
  out += "samples: " + std::to_string(report.config.samples);
  out += "   seed: " + std::to_string(report.config.seed);
  out += "   tol: " + fmtg(report.config.tol);
  out += "   oracle tol: " + fmtg(report.config.oracle_tol) + "\n\n";

  char line[160];
  std::snprintf(line, sizeof line, "%-14s %-9s %-9s %s\n", "condition",
                "expected", "observed", "max residual");
  out += line;
  const auto row = [&](const char* name, bool exp, bool obs, double residual) {
    std::snprintf(line, sizeof line, "%-14s %-9s %-9s %s\n", name, yn(exp),
                  yn(obs), fmt3(residual).c_str());
    out += line;
  };
  row("hwc", report.expected.hwc, report.observed.hwc, report.aggregates.hwc);
  row("harmonic", report.expected.harmonic, report.observed.harmonic,
      report.aggregates.harmonic);
  row("biharmonic", report.expected.biharmonic, report.observed.biharmonic,
      report.aggregates.biharmonic);
  row("4-harmonic", report.expected.four_harmonic,
      report.observed.four_harmonic, report.aggregates.four_harmonic);
  row("morphism", report.expected.morphism, report.observed.morphism,
      report.aggregates.quartic);
  out += "(morphism residual column = quartic invariant, normalized)\n";
  out += "trace screen max: " + fmt3(report.aggregates.trace_screen) + "\n";
  if (!report.all_regular) out += "WARNING: irregular sample point\n";

  if (!report.oracle_errors.empty()) {
    out += "\nclosed-form checks (max relative error over samples)\n";
    for (const auto& [key, err] : report.oracle_errors) {
      std::snprintf(line, sizeof line, "  %-22s %s%s\n", key.c_str(),
                    fmt3(err).c_str(),
                    err < report.config.oracle_tol ? "" : "  <-- FAIL");
      out += line;
    }
  }
  out += "\nresult: ";
  out += report.match ? "MATCH" : "MISMATCH";
  out += "\n";
  return out;
}

std::string render_json(const CheckReport& report) {
  std::string out = "{\n";
  out += "\"kind\":\"check\",\n";
  out += "\"entry\":" + json_string(report.config.entry) + ",\n";
  out += "\"summary\":" + json_string(report.summary) + ",\n";
  out += "\"params\":";
  append_params(out, report.config.params);
  out += ",\n";
  out += "\"domain_dim\":" + std::to_string(report.domain_dim) + ",\n";
  out += "\"target_dim\":" + std::to_string(report.target_dim) + ",\n";
  out += "\"samples\":" + std::to_string(report.config.samples) + ",\n";
  out += "\"seed\":" + std::to_string(report.config.seed) + ",\n";
  out += "\"tol\":" + fmt17(report.config.tol) + ",\n";
  out += "\"oracle_tol\":" + fmt17(report.config.oracle_tol) + ",\n";
  out += "\"all_regular\":";
  out += report.all_regular ? "true" : "false";
  out += ",\n\"expected\":";
  append_verdicts(out, report.expected);
  out += ",\n\"observed\":";
  append_verdicts(out, report.observed);
  out += ",\n\"aggregates\":";
  append_aggregates(out, report.aggregates);
  out += ",\n\"oracle_errors\":";
  append_error_map(out, report.oracle_errors);
  out += ",\n\"points\":[\n";
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const PointRecord& p = report.points[i];
    out += "{\"x\":[";
    for (std::size_t j = 0; j < p.x.size(); ++j) {
      if (j) out += ",";
      out += fmt17(p.x[j]);
    }
    out += "],\"lambda2\":" + fmt17(p.lambda2);
    out += ",\"hwc_residual\":" + fmt17(p.hwc_residual);
    out += ",\"tau_norm\":" + fmt17(p.tau_norm);
    out += ",\"harmonic_normalized\":" + fmt17(p.harmonic_normalized);
    out += ",\"tau2_norm\":" + fmt17(p.tau2_norm);
    out += ",\"bitension_normalized\":" + fmt17(p.bitension_normalized);
    out += ",\"four_harmonic_normalized\":" +
           fmt17(p.four_harmonic_normalized);
    out += ",\"quartic_total\":" + fmt17(p.quartic_total);
    out += ",\"quartic_normalized\":" + fmt17(p.quartic_normalized);
    out += ",\"trace_screen\":" + fmt17(p.trace_screen);
    out += ",\"oracle_errors\":";
    append_error_map(out, p.oracle_errors);
    out += "}";
    if (i + 1 < report.points.size()) out += ",";
    out += "\n";
  }
  out += "],\n";
  out += "\"verdicts_match\":";
  out += report.verdicts_match ? "true" : "false";
  out += ",\n\"oracles_pass\":";
  out += report.oracles_pass ? "true" : "false";
  out += ",\n\"match\":";
  out += report.match ? "true" : "false";
  out += "\n}\n";
  return out;
}

std::string render_text(const SweepReport& report) {
  std::string out;
  out += "entry: " + report.config.entry;
  out += "   varied: ";
  out += report.varied;
  out += "   samples: " + std::to_string(report.config.samples);
  out += "   seed: " + std::to_string(report.config.seed);
  out += "   tol: " + fmtg(report.config.tol) + "\n\n";

  char line[200];
  std::snprintf(line, sizeof line, "%4s  %-5s %-9s %-11s %-11s %-9s %-6s %s\n",
                "dim", "hwc", "harmonic", "biharmonic", "4-harmonic",
                "morphism", "match", "notes");
  out += line;
  for (const SweepRow& row : report.rows) {
    std::string notes;
    if (row.observed.harmonic) notes += "harmonic";
    if (!row.match) {
      if (!notes.empty()) notes += "  ";
      notes += "MISMATCH(";
      std::string bad;
      const auto flag = [&](const char* name, bool exp, bool obs) {
        if (exp != obs) {
          if (!bad.empty()) bad += ",";
          bad += name;
        }
      };
      flag("hwc", row.expected.hwc, row.observed.hwc);
      flag("harmonic", row.expected.harmonic, row.observed.harmonic);
      flag("biharmonic", row.expected.biharmonic, row.observed.biharmonic);
      flag("4-harmonic", row.expected.four_harmonic,
           row.observed.four_harmonic);
      flag("morphism", row.expected.morphism, row.observed.morphism);
      if (bad.empty()) bad = "oracle";
      notes += bad + ")";
    }
    std::snprintf(line, sizeof line, "%4d  %-5s %-9s %-11s %-11s %-9s %-6s %s\n",
                  row.dim, yn(row.observed.hwc), yn(row.observed.harmonic),
                  yn(row.observed.biharmonic), yn(row.observed.four_harmonic),
                  yn(row.observed.morphism), yn(row.match), notes.c_str());
    out += line;
  }
  out += "\nall dimensions match: ";
  out += yn(report.all_match);
  out += "\n";
  return out;
}

std::string render_json(const SweepReport& report) {
  std::string out = "{\n";
  out += "\"kind\":\"sweep\",\n";
  out += "\"entry\":" + json_string(report.config.entry) + ",\n";
  out += "\"varied\":" + json_string(std::string(1, report.varied)) + ",\n";
  out += "\"params\":";
  append_params(out, report.config.params);
  out += ",\n";
  out += "\"samples\":" + std::to_string(report.config.samples) + ",\n";
  out += "\"seed\":" + std::to_string(report.config.seed) + ",\n";
  out += "\"tol\":" + fmt17(report.config.tol) + ",\n";
  out += "\"oracle_tol\":" + fmt17(report.config.oracle_tol) + ",\n";
  out += "\"rows\":[\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const SweepRow& row = report.rows[i];
    out += "{\"dim\":" + std::to_string(row.dim);
    out += ",\"expected\":";
    append_verdicts(out, row.expected);
    out += ",\"observed\":";
    append_verdicts(out, row.observed);
    out += ",\"aggregates\":";
    append_aggregates(out, row.aggregates);
    out += ",\"max_oracle_error\":" + fmt17(row.max_oracle_error);
    out += ",\"harmonic\":";
    out += row.observed.harmonic ? "true" : "false";
    out += ",\"match\":";
    out += row.match ? "true" : "false";
    out += "}";
    if (i + 1 < report.rows.size()) out += ",";
    out += "\n";
  }
  out += "],\n";
  out += "\"all_match\":";
  out += report.all_match ? "true" : "false";
  out += "\n}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Catalog listing
// ---------------------------------------------------------------------------

namespace {

std::string param_range_note(const std::string& id) {
  if (id == "inversion" || id == "half_identity") return "n=2..8";
  if (id == "radial") return "m=3..8";
  if (id == "stereo_identity" || id == "conf_flat")
    return "n=2..8, eps=+1|-1";
  if (id == "ball_identity") return "n=2..8 (eps=-1)";
  if (id == "h4_flat") return "none (n=4)";
  if (id == "twisted_projection") return "c1!=0, c2>0";
  return "";
}

}  // namespace

std::string render_catalog_text() {
  std::string out;
  char line[240];
  std::snprintf(line, sizeof line, "%-20s %-8s %-22s %s\n", "id", "map",
                "parameters", "description");
  out += line;
  for (const std::string& id : catalog_ids()) {
    const CatalogEntry entry = make_entry(id, CatalogParams{});
    const std::string dims = std::to_string(entry.domain_dim) + "d->" +
                             std::to_string(entry.target_dim) + "d";
    std::snprintf(line, sizeof line, "%-20s %-8s %-22s %s\n", id.c_str(),
                  dims.c_str(), param_range_note(id).c_str(),
                  entry.summary.c_str());
    out += line;
  }
  return out;
}

std::string render_catalog_json() {
  std::string out = "{\n\"kind\":\"list\",\n\"entries\":[\n";
  const std::vector<std::string> ids = catalog_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const CatalogEntry entry = make_entry(ids[i], CatalogParams{});
    out += "{\"id\":" + json_string(ids[i]);
    out += ",\"summary\":" + json_string(entry.summary);
    out += ",\"domain_dim\":" + std::to_string(entry.domain_dim);
    out += ",\"target_dim\":" + std::to_string(entry.target_dim);
    out += ",\"parameters\":" + json_string(param_range_note(ids[i]));
    out += ",\"expected\":";
    append_verdicts(out, entry.expected);
    out += "}";
    if (i + 1 < ids.size()) out += ",";
    out += "\n";
  }
  out += "]\n}\n";
  return out;
}

}  // namespace bhmap
