// bisurf: implicit equations of P1 x P1 surface parametrizations with base points.
//
//   bisurf check       --input job.json
//   bisurf implicitize --input job.json [--det-backend both] [--json]
//   bisurf verify      --input job.json [--equation "x0*x3 - x1*x2"]
//   bisurf hilbert     --input job.json [--from 0,0] [--to 5,5] [--power 2]
//
// Every flag can also be set through BISURF_<FLAG>, e.g. BISURF_SEED=3.

#include "bisurf/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

std::optional<bisurf::BiDegree> parse_bidegree(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("bidegree must be written K,L");
  return bisurf::BiDegree{std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
}

void add_common(CLI::App* cmd, bisurf::CommandOptions& o, std::uint64_t& seed) {
  cmd->add_option("--input", o.input, "job file (JSON)")->required()->envname("BISURF_INPUT");
  cmd->add_flag("--json", o.json, "emit the JSON report")->envname("BISURF_JSON");
  cmd->add_option("--seed", seed, "seed for coordinate changes and samples")->envname("BISURF_SEED");
  cmd->add_option("--sat-bound", o.sat_bound, "saturation power bound (default 2*max(m,n)+2)")
      ->envname("BISURF_SAT_BOUND");
  cmd->add_option("--window", o.window, "Hilbert stabilization window")->envname("BISURF_WINDOW");
  cmd->add_option("--output", o.output, "write the report to FILE")->envname("BISURF_OUTPUT");
}

void add_pipeline(CLI::App* cmd, bisurf::CommandOptions& o) {
  cmd->add_option("--det-backend", o.det_backend, "cofactor, interp, both or auto")
      ->check(CLI::IsMember({"cofactor", "interp", "both", "auto"}))
      ->envname("BISURF_DET_BACKEND");
  cmd->add_option("--samples", o.samples, "parameter points for exact vanishing checks")
      ->envname("BISURF_SAMPLES");
  cmd->add_flag("--force", o.force, "emit the polynomial even if verification fails")
      ->envname("BISURF_FORCE");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicitization of P1 x P1 parametrizations by moving planes and quadrics"};
  app.require_subcommand(1);

  bisurf::CommandOptions opts;
  std::uint64_t seed = 0;
  std::string from, to;

  auto* check = app.add_subcommand("check", "decide base-point conditions B1-B6");
  add_common(check, opts, seed);

  auto* implicitize = app.add_subcommand("implicitize", "compute |M| = 0");
  add_common(implicitize, opts, seed);
  add_pipeline(implicitize, opts);

  auto* verify = app.add_subcommand("verify", "check an implicit equation against the surface");
  add_common(verify, opts, seed);
  add_pipeline(verify, opts);
  verify->add_option("--equation", opts.equation, "polynomial in x0..x3 (default: compute |M|)")
      ->envname("BISURF_EQUATION");

  auto* hilbert = app.add_subcommand("hilbert", "table of dim (R/I)_{k,l}");
  add_common(hilbert, opts, seed);
  hilbert->add_option("--from", from, "lower corner K,L (default 0,0)")->envname("BISURF_FROM");
  hilbert->add_option("--to", to, "upper corner K,L (default 2m+1,2n+1)")->envname("BISURF_TO");
  hilbert->add_option("--power", opts.power, "1 for I, 2 for I^2")->envname("BISURF_POWER");

  try {
    app.parse(argc, argv);
    opts.command = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommands().front();
    if (sub->count("--seed") > 0 || std::getenv("BISURF_SEED")) opts.seed = seed;
    opts.from = parse_bidegree(from);
    opts.to = parse_bidegree(to);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : bisurf::kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return bisurf::kExitInput;
  }
  return bisurf::run_command(opts, std::cout, std::cerr);
}
