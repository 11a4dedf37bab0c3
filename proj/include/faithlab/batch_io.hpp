#pragma once

#include "faithlab/sampler.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>

namespace faithlab {

/// Writes `alpha_idx,beta_idx,a,b`; the `a` column is omitted when the
/// first outcome is hidden.
void write_events_csv(std::ostream& out, const EventBatch& batch);

/// Sidecar carrying experiment, grid, seed, policy and demon fields.
nlohmann::json batch_metadata(const EventBatch& batch);

/// Reads a CSV written by write_events_csv together with its sidecar.
EventBatch read_batch(std::istream& csv, const nlohmann::json& metadata);

void save_batch(const EventBatch& batch, const std::filesystem::path& csv_path,
                const std::filesystem::path& json_path);
EventBatch load_batch(const std::filesystem::path& csv_path, const std::filesystem::path& json_path);

nlohmann::json to_json(const SettingsGrid& grid);
SettingsGrid grid_from_json(const nlohmann::json& j);

}  // namespace faithlab
