#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "edcssm/pipeline.hpp"

namespace edcssm {

// JSON round-trip for the pipeline configuration. Parsing is lenient about
// missing keys (defaults apply) but strict about values: unknown enum names
// and out-of-domain numbers raise std::invalid_argument.
nlohmann::json config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const nlohmann::json& j);

PipelineConfig load_config_file(const std::string& path);
void save_config_file(const std::string& path, const PipelineConfig& config);

} // namespace edcssm
