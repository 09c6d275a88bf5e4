// bhmap — command-line front end for the catalog checker.
//
//   bhmap list                       show the built-in chart families
//   bhmap check --entry inversion --n 4 [--json] [--out FILE]
//   bhmap sweep --entry inversion --dims 2..6
//
// Exit codes: 0 when every observed verdict (and closed-form comparison)
// matches the catalog's expectations, 1 on a mismatch, 2 on a usage error.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "bhmap/report.hpp"

namespace {

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "cannot open output file: %s\n", out_path.c_str());
    return 2;
  }
  out << text;
  return out.good() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numeric checker for conformal biharmonic maps and morphisms"};
  app.require_subcommand(1);

  bhmap::RunConfig config;
  std::string dims_text = "2..6";
  std::string out_path;
  bool as_json = false;

  CLI::App* list = app.add_subcommand("list", "list the catalog entries");
  list->add_flag("--json", as_json, "emit JSON instead of a table");
  list->add_option("--out", out_path, "write the output to a file");

  const auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("--entry", config.entry, "catalog entry id")->required();
    cmd->add_option("--n", config.params.n, "dimension for identity-type charts");
    cmd->add_option("--m", config.params.m, "domain dimension for the radial retraction");
    cmd->add_option("--eps", config.params.eps, "round-chart sign (+1 or -1)");
    cmd->add_option("--c1", config.params.c1, "twisted-product rate (nonzero)");
    cmd->add_option("--c2", config.params.c2, "twisted-product scale (positive)");
    cmd->add_option("--samples", config.samples, "sample points per run");
    cmd->add_option("--seed", config.seed, "sampling seed");
    cmd->add_option("--tol", config.tol, "zero-detection threshold");
    cmd->add_flag("--json", as_json, "emit JSON instead of a table");
    cmd->add_option("--out", out_path, "write the output to a file");
  };

  CLI::App* check =
      app.add_subcommand("check", "evaluate one entry at sampled points");
  add_run_options(check);

  CLI::App* sweep =
      app.add_subcommand("sweep", "run one entry across a dimension range");
  add_run_options(sweep);
  sweep->add_option("--dims", dims_text, "dimensions: '4', '2,4,5' or '2..6'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      const std::string text =
          as_json ? bhmap::render_catalog_json() : bhmap::render_catalog_text();
      return emit(text, out_path);
    }
    if (check->parsed()) {
      const bhmap::CheckReport report = bhmap::run_check(config);
      const std::string text =
          as_json ? bhmap::render_json(report) : bhmap::render_text(report);
      if (const int rc = emit(text, out_path); rc != 0) return rc;
      return report.match ? 0 : 1;
    }
    const bhmap::SweepReport report =
        bhmap::run_sweep(config, bhmap::parse_dims(dims_text));
    const std::string text =
        as_json ? bhmap::render_json(report) : bhmap::render_text(report);
    if (const int rc = emit(text, out_path); rc != 0) return rc;
    return report.all_match ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
