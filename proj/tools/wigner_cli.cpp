// Command-line front end: synthesize, verify, pipeline, report.
//
// Exit codes: 0 all stages passed, 1 a verifier or pipeline stage failed,
// 2 usage, configuration or I/O error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wigner/wigner.hpp"

namespace {

struct Overrides {
  std::optional<int> n, k, m, trials, target_n;
  std::optional<std::string> kind, spec;
  std::optional<double> perturb_eps;
  std::vector<std::string> verifiers;
};

void add_map_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-n,--n", o.n, "Matrix dimension");
  cmd->add_option("-k,--k", o.k, "Projection rank");
  cmd->add_option("--kind", o.kind, "unitary | antiunitary | identity | jordan_block | complement");
  cmd->add_option("--target-n", o.target_n, "Target dimension for jordan_block");
  cmd->add_option("--perturb-eps", o.perturb_eps, "Perturb the synthesized map by this strength");
}

void add_run_options(CLI::App* cmd, Overrides& o) {
  add_map_options(cmd, o);
  cmd->add_option("--spec", o.spec, "Serialized map spec to use instead of --kind");
  cmd->add_option("--trials", o.trials, "Trials per verifier");
}

wigner::SuiteConfig build_config(const std::optional<std::string>& config_path, std::optional<std::uint64_t> seed,
                                 const std::optional<std::string>& out, const Overrides& o) {
  wigner::SuiteConfig c;
  c.tol = wigner::tolerances_from_environment(c.tol);
  if (config_path) c = wigner::load_config(*config_path, c);
  if (seed) c.seed = *seed;
  if (out) c.out = *out;
  if (o.n) c.n = *o.n;
  if (o.k) c.k = *o.k;
  if (o.m) c.m = *o.m;
  if (o.trials) c.trials = *o.trials;
  if (o.target_n) c.target_n = *o.target_n;
  if (o.kind) c.kind = *o.kind;
  if (o.spec) c.spec_path = *o.spec;
  if (o.perturb_eps) c.perturb_eps = *o.perturb_eps;
  if (!o.verifiers.empty()) c.verifiers = o.verifiers;
  return c;
}

int exit_code_for(const wigner::Error& e) {
  switch (e.code()) {
    case wigner::ErrorCode::ConfigInvalid:
    case wigner::ErrorCode::IoFailure:
    case wigner::ErrorCode::ParseFailure:
    case wigner::ErrorCode::InvalidContext:
    case wigner::ErrorCode::DimensionMismatch:
    case wigner::ErrorCode::NotBalanced:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for transition-probability-preserving maps on Grassmann spaces"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<std::string> config_path, out;
  app.add_option("--seed", seed, "Random seed")->expected(1);
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", out, "Output path");

  Overrides syn_o, ver_o, pipe_o;
  auto* syn = app.add_subcommand("synthesize", "Emit a serialized map spec");
  add_map_options(syn, syn_o);

  auto* ver = app.add_subcommand("verify", "Run property verifier suites");
  add_run_options(ver, ver_o);
  ver->add_option("-m,--m", ver_o.m, "Divisor for reduce_rank (default k)");
  ver->add_option("--verifiers", ver_o.verifiers, "Subset of verifiers to run")->delimiter(',');

  auto* pipe = app.add_subcommand("pipeline", "Run the full reconstruction pipeline");
  add_run_options(pipe, pipe_o);

  std::string report_in;
  bool as_json = false;
  auto* rep = app.add_subcommand("report", "Re-render a stored report");
  rep->add_option("input", report_in, "Report JSON file")->required()->check(CLI::ExistingFile);
  rep->add_flag("--json", as_json, "Print normalized JSON without timing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (syn->parsed()) {
      wigner::SuiteConfig c = build_config(config_path, seed, std::nullopt, syn_o);
      c.validate();
      const std::string text = wigner::spec_to_text(wigner::synthesize_spec(c));
      if (out) {
        wigner::detail::write_file(*out, text);
      } else {
        std::cout << text;
      }
      return 0;
    }
    if (rep->parsed()) {
      wigner::Json j;
      try {
        j = wigner::Json::parse(wigner::detail::read_file(report_in));
      } catch (const wigner::Json::exception& e) {
        throw wigner::Error(wigner::ErrorCode::ParseFailure, report_in + ": " + e.what());
      }
      const wigner::SuiteReport r{j};
      std::cout << (as_json ? r.without_timing().dump(2) + "\n" : wigner::render_report(j));
      return r.all_passed() ? 0 : 1;
    }

    const bool pipeline_only = pipe->parsed();
    wigner::SuiteConfig c = build_config(config_path, seed, out, pipeline_only ? pipe_o : ver_o);
    if (pipeline_only) {
      c.verifiers.clear();
      c.pipeline = true;
    } else if (!config_path) {
      c.pipeline = false;
    }
    const wigner::SuiteReport r = wigner::run_suite(c);
    std::cout << wigner::render_report(r.json);
    return r.all_passed() ? 0 : 1;
  } catch (const wigner::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
