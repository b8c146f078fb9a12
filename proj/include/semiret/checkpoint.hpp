#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "semiret/matchers.hpp"

namespace semiret {

inline constexpr const char* kCheckpointVersion = "semiret-ckpt-1";

nlohmann::json config_to_json(const EncoderConfig& config);
EncoderConfig config_from_json(const nlohmann::json& j);

// Parameters are written as {name, rows, cols, data} with shortest
// round-trip decimal doubles, so save/load is bit-exact.
nlohmann::json encoder_to_json(const EncoderModel& model, const std::string& prefix = "");
void encoder_params_from_json(const nlohmann::json& params, EncoderModel& model,
                              const std::string& prefix = "");

nlohmann::json checkpoint_to_json(const InteractiveModel& model);
nlohmann::json checkpoint_to_json(const DualModel& model);

using AnyModel = std::variant<InteractiveModel, DualModel>;
AnyModel checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const AnyModel& model, const std::filesystem::path& path);
AnyModel load_checkpoint(const std::filesystem::path& path);
InteractiveModel load_interactive(const std::filesystem::path& path);
DualModel load_dual(const std::filesystem::path& path);

}  // namespace semiret
