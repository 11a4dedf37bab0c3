#include "faithlab/batch_io.hpp"

#include "faithlab/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace faithlab {
namespace {

using nlohmann::json;

std::vector<int> parse_row(std::string_view line, std::size_t line_no) {
  std::vector<int> fields;
  while (true) {
    const auto comma = line.find(',');
    const std::string_view field = line.substr(0, comma);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
      throw PreconditionError("malformed CSV field on line " + std::to_string(line_no));
    }
    fields.push_back(value);
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

std::vector<Angle> angles_from_json(const json& j) {
  std::vector<Angle> out;
  for (const auto& v : j) out.emplace_back(v.get<double>());
  return out;
}

}  // namespace

json to_json(const SettingsGrid& grid) {
  json alpha = json::array();
  json beta = json::array();
  for (Angle a : grid.alpha) alpha.push_back(a.value());
  for (Angle b : grid.beta) beta.push_back(b.value());
  return {{"alpha", alpha}, {"beta", beta}};
}

SettingsGrid grid_from_json(const json& j) {
  return {angles_from_json(j.at("alpha")), angles_from_json(j.at("beta"))};
}

void write_events_csv(std::ostream& out, const EventBatch& batch) {
  const bool with_a = batch.first_outcome_visible;
  out << (with_a ? "alpha_idx,beta_idx,a,b\n" : "alpha_idx,beta_idx,b\n");
  std::string buf;
  buf.reserve(1 << 20);
  for (const auto& ev : batch.events) {
    buf += std::to_string(ev.alpha_index);
    buf += ',';
    buf += std::to_string(ev.beta_index);
    buf += ',';
    if (with_a) {
      buf += static_cast<char>('0' + ev.first_outcome);
      buf += ',';
    }
    buf += static_cast<char>('0' + ev.second_outcome);
    buf += '\n';
    if (buf.size() > (1 << 20) - 64) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

json batch_metadata(const EventBatch& batch) {
  return {
      {"experiment", {{"kind", batch.experiment.name()},
                      {"input_weight", batch.experiment.input_weight()}}},
      {"grid", to_json(batch.grid)},
      {"seed", batch.seed},
      {"policy", {{"kind", batch.policy.name()},
                  {"alpha_index", batch.policy.alpha_index},
                  {"beta_index", batch.policy.beta_index}}},
      {"demon", {{"input_weight", batch.demon.input_weight},
                 {"visibility", batch.demon.visibility == Visibility::hidden ? "hidden" : "revealed"}}},
      {"first_outcome_visible", batch.first_outcome_visible},
      {"n", batch.events.size()},
  };
}

EventBatch read_batch(std::istream& csv, const json& metadata) {
  EventBatch batch;
  try {
    const auto& exp = metadata.at("experiment");
    batch.experiment = ExperimentKind::parse(exp.at("kind").get<std::string>(),
                                             exp.at("input_weight").get<double>());
    batch.grid = grid_from_json(metadata.at("grid"));
    batch.seed = metadata.at("seed").get<std::uint64_t>();
    const auto& pol = metadata.at("policy");
    batch.policy = SettingPolicy::parse(pol.at("kind").get<std::string>(),
                                        pol.at("alpha_index").get<int>(),
                                        pol.at("beta_index").get<int>());
    const auto& demon = metadata.at("demon");
    batch.demon.input_weight = demon.at("input_weight").get<double>();
    batch.demon.visibility =
        demon.at("visibility").get<std::string>() == "hidden" ? Visibility::hidden : Visibility::revealed;
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("malformed batch metadata: ") + e.what());
  }

  std::string line;
  if (!std::getline(csv, line)) throw PreconditionError("empty events CSV");
  if (line == "alpha_idx,beta_idx,a,b") {
    batch.first_outcome_visible = true;
  } else if (line == "alpha_idx,beta_idx,b") {
    batch.first_outcome_visible = false;
  } else {
    throw PreconditionError("unexpected CSV header: " + line);
  }
  const std::size_t width = batch.first_outcome_visible ? 4 : 3;
  std::size_t line_no = 1;
  while (std::getline(csv, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = parse_row(line, line_no);
    if (f.size() != width) throw PreconditionError("wrong field count on line " + std::to_string(line_no));
    EventRecord ev;
    if (f[0] < 0 || static_cast<std::size_t>(f[0]) >= batch.grid.alpha.size() || f[1] < 0 ||
        static_cast<std::size_t>(f[1]) >= batch.grid.beta.size()) {
      throw PreconditionError("setting index outside the grid on line " + std::to_string(line_no));
    }
    ev.alpha_index = static_cast<std::uint8_t>(f[0]);
    ev.beta_index = static_cast<std::uint8_t>(f[1]);
    const int a = batch.first_outcome_visible ? f[2] : 0;
    const int b = f[width - 1];
    if ((a != 0 && a != 1) || (b != 0 && b != 1)) {
      throw PreconditionError("outcome is not a bit on line " + std::to_string(line_no));
    }
    ev.first_outcome = static_cast<std::uint8_t>(a);
    ev.second_outcome = static_cast<std::uint8_t>(b);
    batch.events.push_back(ev);
  }
  if (metadata.contains("n") && metadata.at("n").get<std::size_t>() != batch.events.size()) {
    throw PreconditionError("event count does not match metadata");
  }
  return batch;
}

void save_batch(const EventBatch& batch, const std::filesystem::path& csv_path,
                const std::filesystem::path& json_path) {
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
  write_events_csv(csv, batch);
  std::ofstream meta(json_path);
  if (!meta) throw std::runtime_error("cannot write " + json_path.string());
  meta << batch_metadata(batch).dump(2) << '\n';
  if (!csv || !meta) throw std::runtime_error("write failed");
}

EventBatch load_batch(const std::filesystem::path& csv_path, const std::filesystem::path& json_path) {
  std::ifstream csv(csv_path, std::ios::binary);
  if (!csv) throw PreconditionError("cannot read " + csv_path.string());
  std::ifstream meta(json_path);
  if (!meta) throw PreconditionError("cannot read " + json_path.string());
  json metadata;
  try {
    metadata = json::parse(meta);
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("malformed batch metadata: ") + e.what());
  }
  return read_batch(csv, metadata);
}

}  // namespace faithlab
