// Command-line front end: subcommands map onto runner configs. Flags
// override values read from --config. Exit codes: 0 verdict success,
// 2 verdict failure, 1 usage or config error.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hypext/runner.hpp"

namespace {

void add_common_options(CLI::App* cmd, hypext::ExperimentConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON config file (flags override it)");
  cmd->add_option("--family", cfg.family.name, "hyperbolic | euclidean | bump | oscillating");
  cmd->add_option("--B", cfg.family.bump.B, "bump profile start");
  cmd->add_option("--amp", cfg.family.bump.amp, "bump amplitude");
  cmd->add_option("--L", cfg.family.bump.L, "bump transition width");
  cmd->add_option("--n", cfg.n, "fiber manifold dimension");
  cmd->add_option("--k", cfg.k, "extension dimension");
  cmd->add_option("--theta", cfg.theta, "reparametrization angle in (0, pi/2]");
  cmd->add_option("--b-min", cfg.b_grid.min);
  cmd->add_option("--b-max", cfg.b_grid.max);
  cmd->add_option("--b-step", cfg.b_grid.step);
  cmd->add_option("--lambda-min", cfg.lambda_grid.min);
  cmd->add_option("--lambda-max", cfg.lambda_grid.max);
  cmd->add_option("--lambda-step", cfg.lambda_grid.step);
  cmd->add_option("--per-axis", cfg.sphere_grid.per_axis, "sphere lattice points per axis");
  cmd->add_option("--cap-per-chart", cfg.sphere_grid.cap_per_chart);
  cmd->add_option("--fd-step", cfg.sphere_grid.fd_step);
  cmd->add_option("--mask-delta", cfg.mask_delta);
  cmd->add_option("--eps-c2", cfg.eps_c2);
  cmd->add_option("--eps-c0", cfg.eps_c0);
  cmd->add_option("--out", cfg.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical engine for spherical cuts of warped hyperbolic extensions"};
  app.require_subcommand(1);

  hypext::ExperimentConfig cfg;
  std::string config_path;

  auto* verify = app.add_subcommand("verify-identities", "run the scalar identity suites");
  auto* cut = app.add_subcommand("cut", "sample a spherical cut of a family member");
  cut->add_option("--lambda", cfg.cut_lambda, "family parameter");
  cut->add_option("--radius", cfg.cut_radius, "cut radius");
  cut->add_flag("--raw", "emit the un-normalized cut");
  auto* extend = app.add_subcommand("extend-cut", "sample an embedded extension cut");
  extend->add_option("--lambda", cfg.cut_lambda, "family parameter");
  extend->add_option("--s", cfg.extend_s, "extension cut radius");
  extend->add_flag("--raw", "emit the un-normalized cut");
  auto* converge = app.add_subcommand("converge", "scan distances to the predicted limit");
  auto* cauchy = app.add_subcommand("cauchy", "scan pairwise cut distances");
  auto* beta1 = app.add_subcommand("beta1", "compute the small-angle uniformity threshold");
  beta1->add_option("--c", cfg.beta1_c, "limit interval upper end");
  beta1->add_option("--c-prime", cfg.beta1_c_prime, "reparametrized interval upper end");
  beta1->add_option("--origin-B", cfg.beta1_B, "round-cut bound");
  auto* boundary = app.add_subcommand("boundary", "boundary positive-definiteness checks");
  boundary->add_option("--b", cfg.boundary_b, "cut offset");
  boundary->add_option("--lambda-prime", cfg.boundary_lambda_prime);
  boundary->add_option("--margin", cfg.boundary_margin);

  for (CLI::App* cmd : {verify, cut, extend, converge, cauchy, beta1, boundary})
    add_common_options(cmd, cfg, config_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    hypext::ExperimentConfig base;
    if (!config_path.empty()) base = hypext::load_config(config_path);
    // Flags were parsed into cfg; pull config-file values for everything
    // the user did not set on the command line.
    auto keep = [&](const std::string& flag) { return sub->count(flag) > 0; };
    hypext::ExperimentConfig merged = config_path.empty() ? cfg : base;
    if (!config_path.empty()) {
      if (keep("--family")) merged.family.name = cfg.family.name;
      if (keep("--B")) merged.family.bump.B = cfg.family.bump.B;
      if (keep("--amp")) merged.family.bump.amp = cfg.family.bump.amp;
      if (keep("--L")) merged.family.bump.L = cfg.family.bump.L;
      if (keep("--n")) merged.n = cfg.n;
      if (keep("--k")) merged.k = cfg.k;
      if (keep("--theta")) merged.theta = cfg.theta;
      if (keep("--b-min")) merged.b_grid.min = cfg.b_grid.min;
      if (keep("--b-max")) merged.b_grid.max = cfg.b_grid.max;
      if (keep("--b-step")) merged.b_grid.step = cfg.b_grid.step;
      if (keep("--lambda-min")) merged.lambda_grid.min = cfg.lambda_grid.min;
      if (keep("--lambda-max")) merged.lambda_grid.max = cfg.lambda_grid.max;
      if (keep("--lambda-step")) merged.lambda_grid.step = cfg.lambda_grid.step;
      if (keep("--per-axis")) merged.sphere_grid.per_axis = cfg.sphere_grid.per_axis;
      if (keep("--cap-per-chart")) merged.sphere_grid.cap_per_chart = cfg.sphere_grid.cap_per_chart;
      if (keep("--fd-step")) merged.sphere_grid.fd_step = cfg.sphere_grid.fd_step;
      if (keep("--mask-delta")) merged.mask_delta = cfg.mask_delta;
      if (keep("--eps-c2")) merged.eps_c2 = cfg.eps_c2;
      if (keep("--eps-c0")) merged.eps_c0 = cfg.eps_c0;
      if (keep("--out")) merged.out_dir = cfg.out_dir;
      if (keep("--lambda")) merged.cut_lambda = cfg.cut_lambda;
      if (keep("--radius")) merged.cut_radius = cfg.cut_radius;
      if (keep("--s")) merged.extend_s = cfg.extend_s;
      if (keep("--c")) merged.beta1_c = cfg.beta1_c;
      if (keep("--c-prime")) merged.beta1_c_prime = cfg.beta1_c_prime;
      if (keep("--origin-B")) merged.beta1_B = cfg.beta1_B;
      if (keep("--b")) merged.boundary_b = cfg.boundary_b;
      if (keep("--lambda-prime")) merged.boundary_lambda_prime = cfg.boundary_lambda_prime;
      if (keep("--margin")) merged.boundary_margin = cfg.boundary_margin;
    }
    merged.command = sub->get_name();
    if (sub->count("--raw") > 0) merged.cut_normalized = false;
    // Re-validate the merged config through the JSON round trip.
    merged = hypext::config_from_json(hypext::config_to_json(merged));
    return hypext::run(merged);
  } catch (const hypext::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
