#include "edcssm/crossbar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "edcssm/saim.hpp" // valid_convolve

namespace edcssm {

void validate_config(const CrossbarConfig& config) {
    if (!(config.p_v > 0.0))
        throw std::invalid_argument("CrossbarConfig: p_v must be positive");
    if (!(config.p_g > 0.0))
        throw std::invalid_argument("CrossbarConfig: p_g must be positive");
    if (!(config.r_k1 > 0.0))
        throw std::invalid_argument("CrossbarConfig: r_k1 must be positive");
    if (config.conductance_levels < 0 || config.conductance_levels == 1)
        throw std::invalid_argument(
            "CrossbarConfig: conductance_levels must be 0 (off) or >= 2");
    if (!(config.noise_level >= 0.0))
        throw std::invalid_argument("CrossbarConfig: noise_level must be >= 0");
    if (config.samples_per_pulse < 1)
        throw std::invalid_argument("CrossbarConfig: samples_per_pulse must be >= 1");
}

Grid map_to_voltages(const Grid& x, const CrossbarConfig& config) {
    validate_config(config);
    Grid volts(x.rows(), x.cols());
    for (int r = 0; r < x.rows(); ++r)
        for (int c = 0; c < x.cols(); ++c)
            volts(r, c) = config.p_v * x(r, c);
    return volts;
}

Kernel3 map_to_conductances(const Kernel3& kernel, const CrossbarConfig& config) {
    validate_config(config);
    std::array<double, 9> values{};
    double max_abs = 0.0;
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v)
            max_abs = std::max(max_abs, std::abs(kernel.at(u, v)));

    const bool quantize = config.conductance_levels >= 2 && max_abs > 0.0;
    const double g_max = max_abs * config.p_g;
    const double step =
        quantize ? 2.0 * g_max / (config.conductance_levels - 1) : 0.0;

    std::size_t i = 0;
    for (int u = 0; u < 3; ++u) {
        for (int v = 0; v < 3; ++v, ++i) {
            double g = config.p_g * kernel.at(u, v);
            if (quantize) {
                double level = std::round((g + g_max) / step);
                level = std::clamp(level, 0.0,
                                   static_cast<double>(config.conductance_levels - 1));
                g = -g_max + level * step;
            }
            values[i] = g;
        }
    }
    return Kernel3(values);
}

CrossbarOutput crossbar_convolve(const Grid& x, const Kernel3& kernel,
                                 const CrossbarConfig& config,
                                 std::mt19937_64& rng) {
    validate_config(config);
    const Grid volts_in = map_to_voltages(x, config);
    const Kernel3 conductances = map_to_conductances(kernel, config);

    // Clean transimpedance output: -r_k1 * sum(G * V) per output position.
    const Grid currents = valid_convolve(volts_in, conductances);
    Grid volts(currents.rows(), currents.cols());
    double full_scale = 0.0;
    for (int r = 0; r < currents.rows(); ++r) {
        for (int c = 0; c < currents.cols(); ++c) {
            volts(r, c) = -config.r_k1 * currents(r, c);
            full_scale = std::max(full_scale, std::abs(volts(r, c)));
        }
    }

    if (config.noise_level > 0.0 && full_scale > 0.0) {
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        const double amplitude = config.noise_level * full_scale;
        for (int r = 0; r < volts.rows(); ++r) {
            for (int c = 0; c < volts.cols(); ++c) {
                double acc = 0.0;
                for (int s = 0; s < config.samples_per_pulse; ++s)
                    acc += volts(r, c) + amplitude * unit(rng);
                volts(r, c) = acc / config.samples_per_pulse;
            }
        }
    }

    Grid decoded(volts.rows(), volts.cols());
    const double coefficient = -config.r_k1 * config.p_v * config.p_g;
    for (int r = 0; r < volts.rows(); ++r)
        for (int c = 0; c < volts.cols(); ++c)
            decoded(r, c) = volts(r, c) / coefficient;
    return {std::move(volts), std::move(decoded)};
}

CrossbarOutput crossbar_convolve(const Grid& x, const Kernel3& kernel,
                                 const CrossbarConfig& config) {
    std::mt19937_64 rng(config.rng_seed);
    return crossbar_convolve(x, kernel, config, rng);
}

ReadoutErrorStats readout_error(const CrossbarConfig& config, int trials) {
    validate_config(config);
    if (trials < 100)
        throw std::invalid_argument("readout_error: trials must be >= 100");

    const Kernel3 kernel = build_kernel_set().dx;
    std::mt19937_64 rng(config.rng_seed);
    std::uniform_real_distribution<double> intensity(0.0, 255.0);

    double total = 0.0;
    double worst = 0.0;
    std::size_t samples = 0;
    for (int t = 0; t < trials; ++t) {
        Grid x(7, 7);
        for (int r = 0; r < 7; ++r)
            for (int c = 0; c < 7; ++c)
                x(r, c) = intensity(rng);
        const Grid exact = valid_convolve(x, kernel);
        const CrossbarOutput out = crossbar_convolve(x, kernel, config, rng);

        double full_scale = 0.0;
        for (int r = 0; r < exact.rows(); ++r)
            for (int c = 0; c < exact.cols(); ++c)
                full_scale = std::max(full_scale, std::abs(exact(r, c)));
        if (full_scale == 0.0)
            full_scale = 1.0;

        for (int r = 0; r < exact.rows(); ++r) {
            for (int c = 0; c < exact.cols(); ++c) {
                const double err =
                    std::abs(out.decoded(r, c) - exact(r, c)) / full_scale;
                total += err;
                worst = std::max(worst, err);
                ++samples;
            }
        }
    }
    return {total / static_cast<double>(samples), worst};
}

ThroughputModel default_throughput_model() {
    ThroughputModel model;
    model.anchors = {
        {307200.0, 0.0005},     {921600.0, 0.0014},    {1440000.0, 0.0024},
        {2073600.0, 0.0034},    {3686400.0, 0.0063},   {5242880.0, 0.0116},
        {8294400.0, 0.0177},    {12496896.0, 0.0290},  {14745600.0, 0.0314},
        {28398972.0, 0.0587},   {36000000.0, 0.0746},  {41859000.0, 0.0901},
        {56000160.0, 0.1181},   {59406336.0, 0.1225},  {65532000.0, 0.1376},
        {74261980.0, 0.1722},   {87600000.0, 0.1835},  {100000000.0, 0.22907},
        {125826696.0, 0.2932},  {221206839.0, 0.5225},
    };
    return model;
}

ThroughputEstimate estimate_throughput(std::uint64_t pixel_count,
                                       const ThroughputModel& model) {
    if (pixel_count == 0)
        throw std::invalid_argument("estimate_throughput: pixel_count must be > 0");
    if (model.anchors.size() < 2)
        throw std::invalid_argument("estimate_throughput: need at least two anchors");
    for (std::size_t i = 0; i < model.anchors.size(); ++i) {
        const auto& [px, sec] = model.anchors[i];
        if (!(px > 0.0) || !(sec > 0.0))
            throw std::invalid_argument("estimate_throughput: anchors must be positive");
        if (i > 0 && (px <= model.anchors[i - 1].first ||
                      sec <= model.anchors[i - 1].second))
            throw std::invalid_argument(
                "estimate_throughput: anchors must increase in both coordinates");
    }

    const double px = static_cast<double>(pixel_count);
    // Anchor hits return the tabulated time bit-exactly; interpolation
    // arithmetic would otherwise wobble in the last ulp.
    for (const auto& [ax, ay] : model.anchors)
        if (px == ax)
            return {ay, 1.0 / ay};
    double seconds = 0.0;
    if (px <= model.anchors.front().first) {
        // Line through the origin: time vanishes with the workload.
        seconds = model.anchors.front().second * px / model.anchors.front().first;
    } else if (px >= model.anchors.back().first) {
        const auto& [x1, y1] = model.anchors[model.anchors.size() - 2];
        const auto& [x2, y2] = model.anchors.back();
        seconds = y2 + (px - x2) * (y2 - y1) / (x2 - x1);
    } else {
        for (std::size_t i = 1; i < model.anchors.size(); ++i) {
            const auto& [x1, y1] = model.anchors[i - 1];
            const auto& [x2, y2] = model.anchors[i];
            if (px <= x2) {
                seconds = y1 + (px - x1) * (y2 - y1) / (x2 - x1);
                break;
            }
        }
    }
    return {seconds, 1.0 / seconds};
}

} // namespace edcssm
