#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qwind/quaternion.hpp"
#include "qwind/radial.hpp"
#include "qwind/winding_sim.hpp"

namespace qwind {

enum class Route
{
    timechange,
    direct,
    girsanov,
};

std::string_view to_string(Route route);
Route parse_route(std::string_view name);

/// Experiment description. JSON keys match the field names below in
/// camelCase: geometry, horizon, startRadius, nPaths, stepPolicy, frequencies,
/// masterSeed, outputPath, routes, workers, generator.
struct RunConfig
{
    GeometryKind geometry = GeometryKind::flat_H;
    double horizon = 1.0;
    double start_radius = 1.0;
    std::size_t n_paths = 10000;
    StepPolicy step_policy = StepPolicy::uniform(1e-3);
    std::vector<WindingVector> frequencies{{0.5, 0.0, 0.0}, {1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}};
    std::uint64_t master_seed = 0;
    std::string output_path;
    std::vector<Route> routes{Route::timechange, Route::girsanov};
    int workers = 1;
    std::string generator{kGeneratorName};

    /// Throws ConfigError on out-of-domain values.
    void validate() const;
};

/// Unknown keys, wrong types and invalid values raise ConfigError. Missing
/// keys keep their defaults. Frequencies are 3-vectors or plain numbers; a
/// number n stands for (n, 0, 0).
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

/// `execution` adds the fields that do not affect results (outputPath, workers).
nlohmann::json to_json(const RunConfig& cfg, bool execution = true);

}  // namespace qwind
