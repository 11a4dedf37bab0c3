#include "commands.hpp"
#include "run_config.hpp"

#include "faithlab/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <numbers>
#include <stdexcept>

using faithlab::cli::RunConfig;

namespace {

struct RawFlags {
  bool degrees = false;
  std::vector<double> grid;
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  std::vector<int> fixed;
  std::vector<double> spec;
  bool unconstrained = false;
  bool no_latent = false;
  bool no_bell = false;
  std::string config_path;
  std::string out_override;
};

void add_common(CLI::App* sub, RunConfig& c, RawFlags& raw) {
  sub->add_option("--out", c.out_dir, "Output directory");
  sub->add_flag("--degrees", raw.degrees, "Interpret angles as degrees");
}

void add_grid(CLI::App* sub, RawFlags& raw) {
  sub->add_option("--grid", raw.grid, "Angles for both wings (comma separated)")->delimiter(',');
  sub->add_option("--alpha-grid", raw.alpha_grid, "Angles for the first wing")->delimiter(',');
  sub->add_option("--beta-grid", raw.beta_grid, "Angles for the second wing")->delimiter(',');
}

void add_batch_input(CLI::App* sub, RunConfig& c) {
  sub->add_option("--csv", c.csv, "Event CSV written by simulate");
  sub->add_option("--meta", c.meta, "JSON sidecar (defaults to the CSV path with .json)");
}

std::vector<double> to_radians(std::vector<double> v, bool degrees) {
  if (degrees) {
    for (double& x : v) x *= std::numbers::pi / 180.0;
  }
  return v;
}

void finalize(RunConfig& c, const RawFlags& raw) {
  std::vector<double> alpha = raw.alpha_grid.empty() ? raw.grid : raw.alpha_grid;
  std::vector<double> beta = raw.beta_grid.empty() ? raw.grid : raw.beta_grid;
  c.alpha_grid = alpha.empty() ? faithlab::cli::default_alpha_grid() : to_radians(alpha, raw.degrees);
  c.beta_grid = beta.empty() ? faithlab::cli::default_beta_grid() : to_radians(beta, raw.degrees);
  if (!raw.fixed.empty()) {
    if (raw.fixed.size() != 2) throw std::invalid_argument("--fixed takes two indices i,j");
    c.fixed_alpha = raw.fixed[0];
    c.fixed_beta = raw.fixed[1];
    if (c.policy == "uniform-random") c.policy = "fixed";
  }
  if (!raw.spec.empty()) {
    if (raw.spec.size() != 4) throw std::invalid_argument("--spec takes four angles a0,a1,b0,b1");
    const auto s = to_radians(raw.spec, raw.degrees);
    c.spec = {s[0], s[1], s[2], s[3]};
  }
  c.settings_exogenous = !raw.unconstrained;
  c.latent = !raw.no_latent;
  c.bell_violated = !raw.no_bell;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"faithlab: Bell-type experiments, conditional independence and fine-tuning"};
  app.require_subcommand(1);
  RunConfig c;
  RawFlags raw;

  auto* simulate = app.add_subcommand("simulate", "Sample an event batch");
  add_common(simulate, c, raw);
  add_grid(simulate, raw);
  simulate->add_option("--experiment", c.experiment, "eprb, seprb or icseprb")
      ->check(CLI::IsMember({"eprb", "seprb", "icseprb"}));
  simulate->add_option("--n", c.n, "Number of events");
  simulate->add_option("--seed", c.seed, "Random seed");
  simulate->add_option("--policy", c.policy, "uniform-random, fixed or round-robin")
      ->check(CLI::IsMember({"uniform-random", "fixed", "round-robin"}));
  simulate->add_option("--fixed", raw.fixed, "Setting indices i,j for the fixed policy")->delimiter(',');
  simulate->add_option("--p", c.p, "Input weight for seprb");
  simulate->add_option("--demon-p", c.demon_p, "Demon input weight for icseprb");
  simulate->add_flag("--hidden", c.hidden, "Hide the demon's input column");

  auto* analyze = app.add_subcommand("analyze", "No-signalling tests and correlations for a batch");
  add_common(analyze, c, raw);
  add_batch_input(analyze, c);
  analyze->add_option("--level", c.level, "Test level");

  auto* chsh = app.add_subcommand("chsh", "CHSH value, exact or from a batch");
  add_common(chsh, c, raw);
  add_batch_input(chsh, c);
  chsh->add_flag("--exact", c.exact, "Use closed-form correlators");
  chsh->add_option("--spec", raw.spec, "Angles a0,a1,b0,b1")->delimiter(',');

  auto* triad = app.add_subcommand("triad", "Enumerate and classify causal structures");
  add_common(triad, c, raw);
  triad->add_flag("--unconstrained", raw.unconstrained, "Allow edges into the settings");
  triad->add_flag("--no-latent", raw.no_latent, "Leave out the latent common cause");
  triad->add_flag("--no-bell", raw.no_bell, "Do not assume a Bell violation");

  auto* finetune = app.add_subcommand("finetune", "Perturbation test for fine-tuned independences");
  add_common(finetune, c, raw);
  add_grid(finetune, raw);
  finetune->add_option("--model", c.model, "seprb or cancelling-paths")
      ->check(CLI::IsMember({"seprb", "cancelling-paths"}));
  finetune->add_option("--eps", c.epsilons, "Perturbation sizes")->delimiter(',');
  finetune->add_option("--parameter", c.parameter, "Parameter to perturb (cancelling-paths: q0, q1, a, b, base)");
  finetune->add_option("--p", c.p, "Input weight of the seprb model");

  auto* equivalence = app.add_subcommand("equivalence", "Compare EPRB and SEPRB joints over a grid");
  add_common(equivalence, c, raw);
  equivalence->add_option("--density", c.density, "Angles per wing");

  auto* rerun = app.add_subcommand("rerun", "Replay a config.json echo");
  rerun->add_option("--config", raw.config_path, "Path to config.json")->required();
  rerun->add_option("--out", raw.out_override, "Output directory (defaults to the recorded one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (rerun->parsed()) {
      c = faithlab::cli::read_config(raw.config_path);
      if (!raw.out_override.empty()) c.out_dir = raw.out_override;
    } else {
      c.command = app.get_subcommands().front()->get_name();
      finalize(c, raw);
    }
    faithlab::cli::execute(c);
    return 0;
  } catch (const faithlab::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
