#include "commands.hpp"

#include "faithlab/batch_io.hpp"
#include "faithlab/causal.hpp"
#include "faithlab/corestats.hpp"
#include "faithlab/errors.hpp"
#include "faithlab/sampler.hpp"
#include "faithlab/svg.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <stdexcept>

namespace faithlab::cli {

namespace {

std::ofstream open_output(const RunConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  std::ofstream out(c.out_dir / name);
  if (!out) throw std::runtime_error("cannot write " + (c.out_dir / name).string());
  out << std::setprecision(17);
  return out;
}

void write_text(const RunConfig& c, const std::string& name, const std::string& text) {
  auto out = open_output(c, name);
  out << text;
}

void write_json(const RunConfig& c, const std::string& name, const nlohmann::json& j) {
  write_text(c, name, j.dump(2) + "\n");
}

SettingsGrid grid_of(const RunConfig& c) {
  SettingsGrid g;
  for (double a : c.alpha_grid) g.alpha.emplace_back(a);
  for (double b : c.beta_grid) g.beta.emplace_back(b);
  return g;
}

std::filesystem::path sidecar_for(const RunConfig& c) {
  if (!c.meta.empty()) return c.meta;
  std::filesystem::path p = c.csv;
  return p.replace_extension(".json");
}

EventBatch load_input(const RunConfig& c) {
  if (c.csv.empty()) throw std::invalid_argument("--csv is required");
  return load_batch(c.csv, sidecar_for(c));
}

}  // namespace

void cmd_simulate(const RunConfig& c) {
  const ExperimentKind kind = ExperimentKind::parse(c.experiment, c.p);
  if (c.hidden && kind.variant() == ExperimentKind::Variant::eprb) {
    throw std::invalid_argument("--hidden applies to the sequential experiments only");
  }
  const SettingPolicy policy = SettingPolicy::parse(c.policy, c.fixed_alpha, c.fixed_beta);
  const DemonPolicy demon{c.demon_p, c.hidden ? Visibility::hidden : Visibility::revealed};
  EventBatch batch = project_observables(sample(kind, grid_of(c), policy, demon, c.n, c.seed), demon);

  std::filesystem::create_directories(c.out_dir);
  save_batch(batch, c.out_dir / "events.csv", c.out_dir / "events.json");

  const std::size_t na = batch.grid.alpha.size();
  const std::size_t nb = batch.grid.beta.size();
  std::vector<std::int64_t> pair_counts(na * nb, 0);
  std::int64_t b_ones = 0;
  std::int64_t a_ones = 0;
  for (const auto& ev : batch.events) {
    ++pair_counts[ev.alpha_index * nb + ev.beta_index];
    b_ones += ev.second_outcome;
    a_ones += ev.first_outcome;
  }
  std::cout << "experiment: " << kind.name() << "\n"
            << "events: " << batch.size() << "\n"
            << "seed: " << batch.seed << "\n";
  if (batch.first_outcome_visible) std::cout << "first outcome = 1: " << a_ones << "\n";
  std::cout << "B = 1: " << b_ones << "\n";
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      std::cout << "pair (" << i << "," << j << "): " << pair_counts[i * nb + j] << "\n";
    }
  }
  std::cout << "wrote " << (c.out_dir / "events.csv").string() << "\n";
}

void cmd_analyze(const RunConfig& c) {
  const EventBatch batch = load_input(c);
  const auto tests = nosignalling_suite(batch, c.level);

  nlohmann::json report;
  report["n"] = batch.size();
  report["level"] = c.level;
  report["tests"] = nlohmann::json::array();
  auto ci_csv = open_output(c, "ci_tests.csv");
  ci_csv << "statement,statistic,dof,p_value,verdict,n\n";
  for (const auto& t : tests) {
    report["tests"].push_back(to_json(t));
    const char* verdict = t.verdict == Verdict::independent ? "independent" : "dependent";
    ci_csv << '"' << t.statement.to_string() << "\"," << t.statistic << ',' << t.dof << ',' << t.p_value << ','
           << verdict << ',' << t.n << '\n';
    std::cout << t.statement.to_string() << ": " << verdict << " (G = " << t.statistic << ", dof = " << t.dof
              << ", p = " << t.p_value << ")\n";
  }

  report["correlations"] = nlohmann::json::array();
  if (batch.first_outcome_visible) {
    auto corr_csv = open_output(c, "correlations.csv");
    corr_csv << "alpha_idx,beta_idx,alpha,beta,E,se,n,E_quantum\n";
    for (std::size_t i = 0; i < batch.grid.alpha.size(); ++i) {
      for (std::size_t j = 0; j < batch.grid.beta.size(); ++j) {
        const auto est = estimate_correlation(batch, static_cast<int>(i), static_cast<int>(j));
        const double alpha = batch.grid.alpha[i];
        const double beta = batch.grid.beta[j];
        const double closed = correlation(batch.grid.alpha[i], batch.grid.beta[j]);
        nlohmann::json row = to_json(est);
        row["alpha_idx"] = i;
        row["beta_idx"] = j;
        row["quantum"] = closed;
        report["correlations"].push_back(row);
        corr_csv << i << ',' << j << ',' << alpha << ',' << beta << ',' << est.value << ',' << est.standard_error
                 << ',' << est.n << ',' << closed << '\n';
      }
    }
  }
  write_json(c, "analysis.json", report);
}

void cmd_chsh(const RunConfig& c) {
  const double bound = lhv_chsh_bound(c.spec);
  const double quantum = 2.0 * std::numbers::sqrt2;
  ChshReport report;
  std::string mode;
  if (c.exact) {
    report = chsh(c.spec);
    mode = "exact";
  } else {
    report = chsh(load_input(c), c.spec);
    mode = "empirical";
  }
  const ChshReport closed = chsh(c.spec);

  std::cout << std::setprecision(7) << std::fixed;
  std::cout << "mode: " << mode << "\n"
            << "S: " << report.s << "\n"
            << "|S|: " << std::abs(report.s) << "\n"
            << "max |S| over sign placements: " << report.s_max << "\n";
  if (!c.exact) std::cout << "standard error: " << report.s_se << "\n";
  std::cout << "classical bound: " << bound << "\n"
            << "quantum value: " << quantum << "\n";

  nlohmann::json j = to_json(report);
  j["mode"] = mode;
  j["abs_s"] = std::abs(report.s);
  j["classical_bound"] = bound;
  j["quantum_value"] = quantum;
  j["spec"] = {c.spec.a0.value(), c.spec.a1.value(), c.spec.b0.value(), c.spec.b1.value()};
  write_json(c, "chsh.json", j);

  const std::array<Angle, 2> a{c.spec.a0, c.spec.a1};
  const std::array<Angle, 2> b{c.spec.b0, c.spec.b1};
  auto csv = open_output(c, "chsh.csv");
  csv << "i,j,alpha,beta,delta,E,se,E_quantum\n";
  PlotSeries measured{mode == "exact" ? "exact correlators" : "sampled correlators", {}, {}, false, "#d62728"};
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      const double delta = canonicalize(a[i].value() - b[k].value());
      csv << i << ',' << k << ',' << a[i].value() << ',' << b[k].value() << ',' << delta << ',' << report.e[i][k]
          << ',' << report.se[i][k] << ',' << closed.e[i][k] << '\n';
      measured.x.push_back(delta);
      measured.y.push_back(report.e[i][k]);
    }
  }
  PlotSeries curve{"cos 2(alpha - beta)", {}, {}, true, "#1f77b4"};
  for (int k = 0; k <= 200; ++k) {
    const double delta = std::numbers::pi * k / 200.0;
    curve.x.push_back(delta);
    curve.y.push_back(std::cos(2.0 * delta));
  }
  write_text(c, "chsh.svg", render_svg_plot({curve, measured}, "Correlation vs angle difference",
                                            "alpha - beta (rad)", "E"));
}

void cmd_triad(const RunConfig& c) {
  EnumerationConstraints constraints = default_constraints();
  if (!c.settings_exogenous) constraints.exogenous.clear();
  if (!c.latent) constraints.optional_latent.reset();
  const auto nodes = experiment_nodes();
  const TriadReport report = enumerate_and_classify(nodes, constraints, quantum_pattern(), c.bell_violated);

  std::cout << "DAGs: " << report.entries.size() << "\n"
            << "explanatory-and-faithful: " << report.explanatory_and_faithful << "\n"
            << "excluded-by-bell: " << report.excluded_by_bell << "\n"
            << "fine-tuned: " << report.fine_tuned << "\n"
            << "not-markov: " << report.not_markov << "\n"
            << "markov-unfaithful-unexcluded: " << report.markov_unfaithful_unexcluded << "\n";

  write_json(c, "triad.json", to_json(report));
  auto csv = open_output(c, "triad.csv");
  csv << "index,edges,markov_ok,faithful_ok,bell_excluded,verdict\n";
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    const auto& e = report.entries[k];
    csv << k << ",\"" << e.dag.encode() << "\"," << e.markov_ok << ',' << e.faithful_ok << ',' << e.bell_excluded
        << ',' << to_string(e.verdict) << '\n';
  }
}

void cmd_finetune(const RunConfig& c) {
  if (c.epsilons.empty()) throw std::invalid_argument("--eps needs at least one value");
  for (double e : c.epsilons) {
    if (!std::isfinite(e)) throw std::invalid_argument("--eps values must be finite");
  }
  StabilityReport report;
  if (c.model == "seprb") {
    if (!c.parameter.empty() && c.parameter != "p") {
      throw std::invalid_argument("the seprb model perturbs only the input weight p");
    }
    const SettingsGrid g = grid_of(c);
    report = perturb_and_test(seprb_model(g.alpha, g.beta, c.p), "seprb", seprb_input_weight(), c.epsilons,
                              CIStatement(kSecond, kAlpha, {kBeta}));
  } else if (c.model == "cancelling-paths") {
    const std::string param = c.parameter.empty() ? "q1" : c.parameter;
    report = perturb_and_test(cancelling_paths_model({}), "cancelling-paths", cancelling_paths_parameter(param),
                              c.epsilons, CIStatement(kThrombosis, kPill));
  } else {
    throw std::invalid_argument("unknown model '" + c.model + "' (expected seprb or cancelling-paths)");
  }

  const char* verdict = report.verdict == Stability::fine_tuned ? "fine_tuned" : "stable";
  std::cout << "model: " << report.model_id << "\n"
            << "statement: " << report.statement.to_string() << "\n"
            << "verdict: " << verdict << "\n";
  write_json(c, "finetune.json", to_json(report));
  auto csv = open_output(c, "finetune.csv");
  csv << "epsilon,dependence\n";
  PlotSeries series{"dependence", {}, {}, true, "#2ca02c"};
  for (const auto& pt : report.points) {
    csv << pt.epsilon << ',' << pt.dependence << '\n';
    std::cout << "eps " << pt.epsilon << ": dependence " << pt.dependence << "\n";
    series.x.push_back(pt.epsilon);
    series.y.push_back(pt.dependence);
  }
  write_text(c, "finetune.svg", render_svg_plot({series}, "Dependence under perturbation (" + report.model_id + ")",
                                                "epsilon", "max total variation"));
}

void cmd_equivalence(const RunConfig& c) {
  if (c.density < 2) throw std::invalid_argument("--density must be at least 2");
  const auto grid = uniform_angle_grid(c.density);
  const JointTable reference = experiment_joint(ExperimentKind::eprb(), grid, grid);

  double pairwise = 0.0;
  bool all_equivalent = true;
  for (Angle a : grid) {
    for (Angle b : grid) {
      const EquivalenceResult r = operational_equivalence(a, b);
      pairwise = std::max(pairwise, r.max_discrepancy);
      all_equivalent = all_equivalent && r.equivalent;
    }
  }

  nlohmann::json j;
  j["density"] = c.density;
  j["pairs"] = grid.size() * grid.size();
  j["max_discrepancy"] = pairwise;
  j["equivalent"] = all_equivalent;
  j["input_weight_sweep"] = nlohmann::json::array();
  auto csv = open_output(c, "equivalence.csv");
  csv << "input_weight,max_discrepancy,equivalent\n";
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const JointTable other = experiment_joint(ExperimentKind::seprb(p), grid, grid);
    const double d = (reference.cells() - other.cells()).abs().maxCoeff();
    const bool eq = d <= kExactTolerance;
    j["input_weight_sweep"].push_back({{"input_weight", p}, {"max_discrepancy", d}, {"equivalent", eq}});
    csv << p << ',' << d << ',' << eq << '\n';
  }
  write_json(c, "equivalence.json", j);

  std::cout << "grid: " << grid.size() << " x " << grid.size() << "\n"
            << "max discrepancy: " << pairwise << "\n"
            << "equivalent: " << (all_equivalent ? "yes" : "no") << "\n";
}

void execute(const RunConfig& c) {
  if (c.command == "simulate") {
    cmd_simulate(c);
  } else if (c.command == "analyze") {
    cmd_analyze(c);
  } else if (c.command == "chsh") {
    cmd_chsh(c);
  } else if (c.command == "triad") {
    cmd_triad(c);
  } else if (c.command == "finetune") {
    cmd_finetune(c);
  } else if (c.command == "equivalence") {
    cmd_equivalence(c);
  } else {
    throw std::invalid_argument("unknown command '" + c.command + "'");
  }
  write_config(c);
}

}  // namespace faithlab::cli
