#include "run_config.hpp"

#include <fstream>
#include <stdexcept>

namespace faithlab::cli {

std::vector<double> default_alpha_grid() {
  const ChshSpec s = canonical_chsh_spec();
  return {s.a0, s.a1};
}

std::vector<double> default_beta_grid() {
  const ChshSpec s = canonical_chsh_spec();
  return {s.b0, s.b1};
}

nlohmann::json to_json(const RunConfig& c) {
  return {
      {"command", c.command},
      {"out", c.out_dir.string()},
      {"experiment", {{"kind", c.experiment}, {"p", c.p}}},
      {"grid", {{"alpha", c.alpha_grid}, {"beta", c.beta_grid}}},
      {"seed", c.seed},
      {"n", c.n},
      {"policy", {{"kind", c.policy}, {"alpha_index", c.fixed_alpha}, {"beta_index", c.fixed_beta}}},
      {"demon", {{"input_weight", c.demon_p}, {"hidden", c.hidden}}},
      {"batch", {{"csv", c.csv}, {"meta", c.meta}}},
      {"level", c.level},
      {"chsh", {{"exact", c.exact}, {"spec", {c.spec.a0.value(), c.spec.a1.value(), c.spec.b0.value(), c.spec.b1.value()}}}},
      {"triad", {{"settings_exogenous", c.settings_exogenous}, {"latent", c.latent}, {"bell_violated", c.bell_violated}}},
      {"finetune", {{"model", c.model}, {"epsilons", c.epsilons}, {"parameter", c.parameter}}},
      {"density", c.density},
  };
}

RunConfig config_from_json(const nlohmann::json& j) {
  try {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.out_dir = j.at("out").get<std::string>();
    c.experiment = j.at("experiment").at("kind").get<std::string>();
    c.p = j.at("experiment").at("p").get<double>();
    c.alpha_grid = j.at("grid").at("alpha").get<std::vector<double>>();
    c.beta_grid = j.at("grid").at("beta").get<std::vector<double>>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.n = j.at("n").get<std::uint64_t>();
    c.policy = j.at("policy").at("kind").get<std::string>();
    c.fixed_alpha = j.at("policy").at("alpha_index").get<int>();
    c.fixed_beta = j.at("policy").at("beta_index").get<int>();
    c.demon_p = j.at("demon").at("input_weight").get<double>();
    c.hidden = j.at("demon").at("hidden").get<bool>();
    c.csv = j.at("batch").at("csv").get<std::string>();
    c.meta = j.at("batch").at("meta").get<std::string>();
    c.level = j.at("level").get<double>();
    c.exact = j.at("chsh").at("exact").get<bool>();
    const auto spec = j.at("chsh").at("spec").get<std::vector<double>>();
    if (spec.size() != 4) throw std::invalid_argument("chsh.spec needs four angles");
    c.spec = {spec[0], spec[1], spec[2], spec[3]};
    c.settings_exogenous = j.at("triad").at("settings_exogenous").get<bool>();
    c.latent = j.at("triad").at("latent").get<bool>();
    c.bell_violated = j.at("triad").at("bell_violated").get<bool>();
    c.model = j.at("finetune").at("model").get<std::string>();
    c.epsilons = j.at("finetune").at("epsilons").get<std::vector<double>>();
    c.parameter = j.at("finetune").at("parameter").get<std::string>();
    c.density = j.at("density").get<int>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed run config: ") + e.what());
  }
}

void write_config(const RunConfig& c) {
  std::filesystem::create_directories(c.out_dir);
  std::ofstream out(c.out_dir / "config.json");
  if (!out) throw std::runtime_error("cannot write " + (c.out_dir / "config.json").string());
  out << to_json(c).dump(2) << '\n';
}

RunConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

}  // namespace faithlab::cli
