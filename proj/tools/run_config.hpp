#pragma once

#include "faithlab/inference.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace faithlab::cli {

/// Everything a command needs. Angles are stored in radians; the echo
/// written next to a command's outputs replays the run exactly.
struct RunConfig {
  std::string command;
  std::filesystem::path out_dir = "faithlab-out";

  std::string experiment = "eprb";
  double p = 0.5;
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  std::uint64_t seed = 0;
  std::uint64_t n = 100000;
  std::string policy = "uniform-random";
  int fixed_alpha = 0;
  int fixed_beta = 0;
  double demon_p = 0.5;
  bool hidden = false;

  std::string csv;
  std::string meta;
  double level = 0.01;

  bool exact = false;
  ChshSpec spec = canonical_chsh_spec();

  bool settings_exogenous = true;
  bool latent = true;
  bool bell_violated = true;

  std::string model = "seprb";
  std::vector<double> epsilons{0.01, 0.05, 0.1};
  std::string parameter;

  int density = 19;
};

/// Grid used when none is given: the CHSH measurement angles.
std::vector<double> default_alpha_grid();
std::vector<double> default_beta_grid();

nlohmann::json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

void write_config(const RunConfig& c);
RunConfig read_config(const std::filesystem::path& path);

}  // namespace faithlab::cli
