#include "edcssm/config_io.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace edcssm {

namespace {

std::string border_name(BorderPolicy b) {
    switch (b) {
    case BorderPolicy::zero: return "zero";
    case BorderPolicy::reflect: return "reflect";
    case BorderPolicy::replicate: return "replicate";
    }
    throw std::invalid_argument("unknown border policy");
}

BorderPolicy border_from_name(const std::string& name) {
    if (name == "zero") return BorderPolicy::zero;
    if (name == "reflect") return BorderPolicy::reflect;
    if (name == "replicate") return BorderPolicy::replicate;
    throw std::invalid_argument("unknown border policy: " + name);
}

std::string fusion_name(FusionMode f) {
    return f == FusionMode::max_magnitude ? "max" : "average";
}

FusionMode fusion_from_name(const std::string& name) {
    if (name == "max") return FusionMode::max_magnitude;
    if (name == "average") return FusionMode::average;
    throw std::invalid_argument("unknown fusion mode: " + name);
}

} // namespace

nlohmann::json config_to_json(const PipelineConfig& config) {
    nlohmann::json j;
    j["scan"] = {
        {"weights",
         {{"a", config.scan.weights.a},
          {"b", config.scan.weights.b},
          {"c", config.scan.weights.c},
          {"d", config.scan.weights.d}}},
        {"border", border_name(config.scan.border)},
        {"flips",
         {{"horizontal", config.scan.flips.horizontal},
          {"vertical", config.scan.flips.vertical}}},
        {"fusion", fusion_name(config.scan.fusion)},
        {"kernel_v", config.scan.kernel_v},
    };
    j["normalize_magnitude"] = config.normalize_magnitude;
    j["hysteresis"] = {{"high", config.hysteresis.high},
                       {"low", config.hysteresis.low}};
    j["erosion"] = {{"enabled", config.erosion_enabled},
                    {"p_mean", config.erosion.p_mean},
                    {"length_threshold", config.erosion.length_threshold},
                    {"cut_threshold", config.erosion.cut_threshold},
                    {"cut_fraction", config.erosion.cut_fraction},
                    {"boundary_band", config.erosion.boundary_band}};
    j["crossbar"] = {{"enabled", config.crossbar_enabled},
                     {"p_v", config.crossbar.p_v},
                     {"p_g", config.crossbar.p_g},
                     {"r_k1", config.crossbar.r_k1},
                     {"conductance_levels", config.crossbar.conductance_levels},
                     {"noise_level", config.crossbar.noise_level},
                     {"samples_per_pulse", config.crossbar.samples_per_pulse},
                     {"rng_seed", config.crossbar.rng_seed}};
    return j;
}

PipelineConfig config_from_json(const nlohmann::json& j) {
    PipelineConfig config;
    if (j.contains("scan")) {
        const nlohmann::json& scan = j.at("scan");
        if (scan.contains("weights")) {
            const nlohmann::json& w = scan.at("weights");
            config.scan.weights.a = w.value("a", config.scan.weights.a);
            config.scan.weights.b = w.value("b", config.scan.weights.b);
            config.scan.weights.c = w.value("c", config.scan.weights.c);
            config.scan.weights.d = w.value("d", config.scan.weights.d);
        }
        if (scan.contains("border"))
            config.scan.border = border_from_name(scan.at("border").get<std::string>());
        if (scan.contains("flips")) {
            const nlohmann::json& f = scan.at("flips");
            config.scan.flips.horizontal =
                f.value("horizontal", config.scan.flips.horizontal);
            config.scan.flips.vertical =
                f.value("vertical", config.scan.flips.vertical);
        }
        if (scan.contains("fusion"))
            config.scan.fusion = fusion_from_name(scan.at("fusion").get<std::string>());
        config.scan.kernel_v = scan.value("kernel_v", config.scan.kernel_v);
    }
    config.normalize_magnitude =
        j.value("normalize_magnitude", config.normalize_magnitude);
    if (j.contains("hysteresis")) {
        const nlohmann::json& h = j.at("hysteresis");
        config.hysteresis.high = h.value("high", config.hysteresis.high);
        config.hysteresis.low = h.value("low", config.hysteresis.low);
    }
    if (j.contains("erosion")) {
        const nlohmann::json& e = j.at("erosion");
        config.erosion_enabled = e.value("enabled", config.erosion_enabled);
        config.erosion.p_mean = e.value("p_mean", config.erosion.p_mean);
        config.erosion.length_threshold =
            e.value("length_threshold", config.erosion.length_threshold);
        config.erosion.cut_threshold =
            e.value("cut_threshold", config.erosion.cut_threshold);
        config.erosion.cut_fraction =
            e.value("cut_fraction", config.erosion.cut_fraction);
        config.erosion.boundary_band =
            e.value("boundary_band", config.erosion.boundary_band);
    }
    if (j.contains("crossbar")) {
        const nlohmann::json& x = j.at("crossbar");
        config.crossbar_enabled = x.value("enabled", config.crossbar_enabled);
        config.crossbar.p_v = x.value("p_v", config.crossbar.p_v);
        config.crossbar.p_g = x.value("p_g", config.crossbar.p_g);
        config.crossbar.r_k1 = x.value("r_k1", config.crossbar.r_k1);
        config.crossbar.conductance_levels =
            x.value("conductance_levels", config.crossbar.conductance_levels);
        config.crossbar.noise_level =
            x.value("noise_level", config.crossbar.noise_level);
        config.crossbar.samples_per_pulse =
            x.value("samples_per_pulse", config.crossbar.samples_per_pulse);
        config.crossbar.rng_seed = x.value("rng_seed", config.crossbar.rng_seed);
    }
    return config;
}

PipelineConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read config file: " + path);
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

void save_config_file(const std::string& path, const PipelineConfig& config) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write config file: " + path);
    out << config_to_json(config).dump(2) << '\n';
}

} // namespace edcssm
