#include "qwind/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "qwind/errors.hpp"

namespace qwind {

using nlohmann::json;

std::string_view to_string(Route route)
{
    switch (route) {
    case Route::timechange:
        return "timechange";
    case Route::direct:
        return "direct";
    case Route::girsanov:
        return "girsanov";
    }
    return "?";
}

Route parse_route(std::string_view name)
{
    if (name == "timechange")
        return Route::timechange;
    if (name == "direct")
        return Route::direct;
    if (name == "girsanov")
        return Route::girsanov;
    throw ConfigError("unknown route '" + std::string(name) + "' (expected timechange, direct or girsanov)");
}

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed)
{
    if (!j.is_object())
        throw ConfigError(where + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (auto a : allowed)
            ok = ok || key == a;
        if (!ok)
            throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double get_number(const json& j, const char* key)
{
    const json& v = j.at(key);
    if (!v.is_number())
        throw ConfigError(std::string("config: '") + key + "' must be a number");
    return v.get<double>();
}

std::uint64_t get_unsigned(const json& j, const char* key)
{
    const json& v = j.at(key);
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(std::string("config: '") + key + "' must be a nonnegative integer");
}

std::string get_string(const json& j, const char* key)
{
    const json& v = j.at(key);
    if (!v.is_string())
        throw ConfigError(std::string("config: '") + key + "' must be a string");
    return v.get<std::string>();
}

StepPolicy parse_policy(const json& j)
{
    check_keys(j, "stepPolicy", {"kind", "step", "start", "ratio", "substeps"});
    StepPolicy p;
    if (j.contains("kind")) {
        const std::string kind = get_string(j, "kind");
        if (kind == "uniform")
            p.kind = StepPolicy::Kind::uniform;
        else if (kind == "geometric")
            p.kind = StepPolicy::Kind::geometric;
        else
            throw ConfigError("stepPolicy.kind must be 'uniform' or 'geometric'");
    }
    if (j.contains("step"))
        p.step = get_number(j, "step");
    if (j.contains("start"))
        p.geometric_start = get_number(j, "start");
    if (j.contains("ratio"))
        p.ratio = get_number(j, "ratio");
    if (j.contains("substeps"))
        p.substeps = static_cast<int>(get_unsigned(j, "substeps"));
    return p;
}

WindingVector parse_frequency(const json& v)
{
    if (v.is_number())
        return {v.get<double>(), 0.0, 0.0};
    if (v.is_array() && v.size() == 3 && v[0].is_number() && v[1].is_number() && v[2].is_number())
        return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    throw ConfigError("frequencies: each entry must be a number or a 3-vector of numbers");
}

}  // namespace

void RunConfig::validate() const
{
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ConfigError("horizon must be positive");
    if (!(start_radius > 0.0) || !std::isfinite(start_radius))
        throw ConfigError("startRadius must be positive");
    if (geometry == GeometryKind::projective_HP1 && !(start_radius < 0.5 * std::numbers::pi))
        throw ConfigError("startRadius must be below pi/2 on hp1");
    if (n_paths < 1)
        throw ConfigError("nPaths must be at least 1");
    if (frequencies.empty())
        throw ConfigError("frequencies must be nonempty");
    for (const auto& f : frequencies)
        if (!std::isfinite(f.norm2()))
            throw ConfigError("frequencies must be finite");
    if (!(step_policy.step > 0.0))
        throw ConfigError("stepPolicy.step must be positive");
    if (step_policy.kind == StepPolicy::Kind::geometric &&
        (!(step_policy.geometric_start > 0.0) || !(step_policy.ratio > 1.0) || step_policy.substeps < 1))
        throw ConfigError("geometric stepPolicy needs start > 0, ratio > 1, substeps >= 1");
    if (routes.empty())
        throw ConfigError("routes must be nonempty");
    if (workers < 1)
        throw ConfigError("workers must be at least 1");
    if (generator != kGeneratorName)
        throw ConfigError("generator '" + generator + "' is not available (only " +
                          std::string(kGeneratorName) + ")");
}

RunConfig parse_run_config(const json& j)
{
    check_keys(j, "config",
               {"geometry", "horizon", "startRadius", "nPaths", "stepPolicy", "frequencies", "masterSeed",
                "outputPath", "routes", "workers", "generator"});
    RunConfig c;
    try {
        if (j.contains("geometry"))
            c.geometry = parse_geometry(get_string(j, "geometry"));
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (j.contains("horizon"))
        c.horizon = get_number(j, "horizon");
    if (j.contains("startRadius"))
        c.start_radius = get_number(j, "startRadius");
    if (j.contains("nPaths"))
        c.n_paths = get_unsigned(j, "nPaths");
    if (j.contains("stepPolicy"))
        c.step_policy = parse_policy(j.at("stepPolicy"));
    if (j.contains("frequencies")) {
        const json& f = j.at("frequencies");
        if (!f.is_array())
            throw ConfigError("frequencies must be an array");
        c.frequencies.clear();
        for (const auto& v : f)
            c.frequencies.push_back(parse_frequency(v));
    }
    if (j.contains("masterSeed"))
        c.master_seed = get_unsigned(j, "masterSeed");
    if (j.contains("outputPath"))
        c.output_path = get_string(j, "outputPath");
    if (j.contains("routes")) {
        const json& r = j.at("routes");
        if (!r.is_array())
            throw ConfigError("routes must be an array of strings");
        c.routes.clear();
        std::set<Route> seen;
        for (const auto& v : r) {
            if (!v.is_string())
                throw ConfigError("routes must be an array of strings");
            const Route route = parse_route(v.get<std::string>());
            if (seen.insert(route).second)
                c.routes.push_back(route);
        }
    }
    if (j.contains("workers"))
        c.workers = static_cast<int>(get_unsigned(j, "workers"));
    if (j.contains("generator"))
        c.generator = get_string(j, "generator");
    c.validate();
    return c;
}

RunConfig parse_run_config(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_run_config(j);
}

RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(std::string_view(ss.str()));
}

json to_json(const RunConfig& c, bool execution)
{
    json policy = {{"kind", c.step_policy.kind == StepPolicy::Kind::uniform ? "uniform" : "geometric"},
                   {"step", c.step_policy.step}};
    if (c.step_policy.kind == StepPolicy::Kind::geometric) {
        policy["start"] = c.step_policy.geometric_start;
        policy["ratio"] = c.step_policy.ratio;
        policy["substeps"] = c.step_policy.substeps;
    }
    json freqs = json::array();
    for (const auto& f : c.frequencies)
        freqs.push_back({f.v1, f.v2, f.v3});
    json routes = json::array();
    for (auto r : c.routes)
        routes.push_back(std::string(to_string(r)));
    json j = {{"geometry", std::string(to_string(c.geometry))},
              {"horizon", c.horizon},
              {"startRadius", c.start_radius},
              {"nPaths", c.n_paths},
              {"stepPolicy", policy},
              {"frequencies", freqs},
              {"masterSeed", c.master_seed},
              {"routes", routes},
              {"generator", c.generator}};
    if (execution) {
        j["outputPath"] = c.output_path;
        j["workers"] = c.workers;
    }
    return j;
}

}  // namespace qwind
