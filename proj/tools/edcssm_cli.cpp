// Command-line front end for the edge-detection pipeline: dataset detection,
// threshold/weight sweeps, metric evaluation, crossbar accuracy benchmarks,
// and the throughput model.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "edcssm/config_io.hpp"
#include "edcssm/dataset.hpp"
#include "edcssm/image_io.hpp"
#include "edcssm/metrics.hpp"
#include "edcssm/parallel.hpp"
#include "edcssm/pipeline.hpp"
#include "edcssm/sweeps.hpp"

namespace fs = std::filesystem;
using namespace edcssm;

namespace {

struct CommonOptions {
    std::string dataset_dir;
    std::string out_dir = "edcssm-out";
    int workers = 1;

    std::optional<std::string> config_path;
    std::optional<double> high;
    std::optional<double> low;
    std::vector<double> weights; // empty or exactly 4
    std::optional<std::string> flips;
    std::optional<std::string> fusion;
    std::optional<std::string> border;
    std::optional<std::string> normalize;
    std::optional<std::string> erosion;
    std::vector<double> erosion_params; // empty or exactly 5
    std::optional<std::string> crossbar;
    std::optional<double> noise;
    std::optional<int> samples;
    std::optional<int> levels;
    std::optional<std::uint64_t> seed;
};

void add_pipeline_flags(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path,
                    "JSON config file; explicit flags override its values");
    cmd->add_option("--high", o.high, "Hysteresis high threshold (0-255)");
    cmd->add_option("--low", o.low, "Hysteresis low threshold (0-255)");
    cmd->add_option("--weights", o.weights,
                    "Scan weights a,b,c,d (comma separated)")
        ->delimiter(',')
        ->expected(4);
    cmd->add_option("--flips", o.flips, "Flipped-scan fusion: h|v|hv|none")
        ->check(CLI::IsMember({"h", "v", "hv", "none"}));
    cmd->add_option("--fusion", o.fusion, "Fusion rule: max|average")
        ->check(CLI::IsMember({"max", "average"}));
    cmd->add_option("--border", o.border, "Tile border policy: zero|reflect|replicate")
        ->check(CLI::IsMember({"zero", "reflect", "replicate"}));
    cmd->add_option("--normalize", o.normalize,
                    "Normalize gradient magnitude to [0,255]: on|off")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--erosion", o.erosion, "Edge-graph clean-up stage: on|off")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--erosion-params", o.erosion_params,
                    "p_mean,length_threshold,cut_threshold,cut_fraction,band")
        ->delimiter(',')
        ->expected(5);
    cmd->add_option("--crossbar", o.crossbar,
                    "Route scan convolutions through the analog simulator: on|off")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--noise", o.noise, "Crossbar noise level (fraction of full scale)");
    cmd->add_option("--samples", o.samples, "Crossbar readout samples per pulse");
    cmd->add_option("--levels", o.levels, "Crossbar conductance levels (0 = off)");
    cmd->add_option("--seed", o.seed, "Crossbar noise RNG seed");
    cmd->add_option("--out", o.out_dir, "Output directory");
    cmd->add_option("--workers", o.workers, "Worker threads")
        ->check(CLI::PositiveNumber);
}

void add_dataset_arg(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("dataset", o.dataset_dir,
                    "Dataset directory (images/ plus optional gt/)")
        ->required();
}

bool flag_on(const std::string& v) { return v == "on"; }

PipelineConfig build_config(const CommonOptions& o) {
    PipelineConfig config =
        o.config_path ? load_config_file(*o.config_path) : PipelineConfig{};
    if (o.high)
        config.hysteresis.high = *o.high;
    if (o.low)
        config.hysteresis.low = *o.low;
    if (!o.weights.empty()) {
        if (o.weights.size() != 4)
            throw std::invalid_argument("--weights needs exactly 4 values a,b,c,d");
        config.scan.weights = {o.weights[0], o.weights[1], o.weights[2], o.weights[3]};
    }
    if (o.flips) {
        config.scan.flips.horizontal = *o.flips == "h" || *o.flips == "hv";
        config.scan.flips.vertical = *o.flips == "v" || *o.flips == "hv";
    }
    if (o.fusion)
        config.scan.fusion =
            *o.fusion == "max" ? FusionMode::max_magnitude : FusionMode::average;
    if (o.border) {
        if (*o.border == "zero")
            config.scan.border = BorderPolicy::zero;
        else if (*o.border == "reflect")
            config.scan.border = BorderPolicy::reflect;
        else
            config.scan.border = BorderPolicy::replicate;
    }
    if (o.normalize)
        config.normalize_magnitude = flag_on(*o.normalize);
    if (o.erosion)
        config.erosion_enabled = flag_on(*o.erosion);
    if (!o.erosion_params.empty()) {
        if (o.erosion_params.size() != 5)
            throw std::invalid_argument(
                "--erosion-params needs exactly 5 values p_mean,L,C,fraction,band");
        config.erosion.p_mean = o.erosion_params[0];
        config.erosion.length_threshold = static_cast<int>(o.erosion_params[1]);
        config.erosion.cut_threshold = static_cast<int>(o.erosion_params[2]);
        config.erosion.cut_fraction = o.erosion_params[3];
        config.erosion.boundary_band = static_cast<int>(o.erosion_params[4]);
    }
    if (o.crossbar)
        config.crossbar_enabled = flag_on(*o.crossbar);
    if (o.noise)
        config.crossbar.noise_level = *o.noise;
    if (o.samples)
        config.crossbar.samples_per_pulse = *o.samples;
    if (o.levels)
        config.crossbar.conductance_levels = *o.levels;
    if (o.seed)
        config.crossbar.rng_seed = *o.seed;
    return config;
}

struct LoadedDataset {
    std::vector<std::string> stems;
    std::vector<Grid> images;
    std::vector<BinaryMap> truths; // empty when require_truth is false and none exist
};

LoadedDataset load_pairs(const std::string& dir, bool require_truth) {
    const DatasetManifest manifest = load_dataset(dir);
    if (manifest.entries.empty())
        throw std::runtime_error("dataset has no images: " + dir);
    if (require_truth && !manifest.has_truth())
        throw std::runtime_error(
            "this command needs ground truth for every image (gt/ directory): " + dir);

    LoadedDataset data;
    for (const DatasetEntry& entry : manifest.entries) {
        LoadedPair pair = load_pair(entry);
        data.stems.push_back(pair.stem);
        data.images.push_back(std::move(pair.image));
        if (pair.truth)
            data.truths.push_back(std::move(*pair.truth));
    }
    if (require_truth && data.truths.size() != data.images.size())
        throw std::runtime_error("ground truth missing for some images: " + dir);
    return data;
}

void ensure_dir(const fs::path& dir) { fs::create_directories(dir); }

void echo_config(const fs::path& out_dir, const PipelineConfig& config) {
    save_config_file((out_dir / "config.json").string(), config);
}

int cmd_detect(const CommonOptions& o) {
    const PipelineConfig config = build_config(o);
    LoadedDataset data = load_pairs(o.dataset_dir, false);
    const fs::path out_dir(o.out_dir);
    ensure_dir(out_dir / "edges");

    std::vector<BinaryMap> results(data.images.size());
    parallel_for(data.images.size(), o.workers, [&](std::size_t i) {
        results[i] = run_pipeline(data.images[i], config).final_edges;
    });
    for (std::size_t i = 0; i < results.size(); ++i)
        save_binary((out_dir / "edges" / (data.stems[i] + ".png")).string(),
                    results[i]);
    echo_config(out_dir, config);
    std::cout << "detect: " << results.size() << " edge maps -> "
              << (out_dir / "edges").string() << "\n";
    return 0;
}

int cmd_eval(const CommonOptions& o) {
    const PipelineConfig config = build_config(o);
    LoadedDataset data = load_pairs(o.dataset_dir, true);
    const fs::path out_dir(o.out_dir);
    ensure_dir(out_dir / "edges");

    std::vector<BinaryMap> edges(data.images.size());
    std::vector<ImageMetrics> metrics(data.images.size());
    parallel_for(data.images.size(), o.workers, [&](std::size_t i) {
        edges[i] = run_pipeline(data.images[i], config).final_edges;
        metrics[i] = evaluate_image(edges[i], data.truths[i]);
    });

    MetricsReport report;
    report.per_image = metrics;
    std::vector<std::vector<ConfusionCounts>> table(1);
    ConfusionCounts total;
    for (const ImageMetrics& m : metrics) {
        table[0].push_back(m.counts);
        total += m.counts;
        report.ac += m.ac;
        report.acl += m.acl;
        report.ssim += m.ssim;
    }
    const double n = static_cast<double>(metrics.size());
    report.ac /= n;
    report.acl /= n;
    report.ssim /= n;
    report.ods = ods_f(table);
    report.ois = ois_f(table);

    for (std::size_t i = 0; i < edges.size(); ++i)
        save_binary((out_dir / "edges" / (data.stems[i] + ".png")).string(),
                    edges[i]);

    std::ofstream csv(out_dir / "metrics.csv");
    csv << "stem,tp,fn,fp,precision,recall,f,acl,ssim,ac\n";
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        const ImageMetrics& m = metrics[i];
        csv << data.stems[i] << ',' << m.counts.tp << ',' << m.counts.fn << ','
            << m.counts.fp << ',' << precision(m.counts) << ',' << recall(m.counts)
            << ',' << m.f << ',' << m.acl << ',' << m.ssim << ',' << m.ac << "\n";
    }
    csv.close();

    nlohmann::json j;
    j["ods"] = report.ods;
    j["ois"] = report.ois;
    j["ac"] = report.ac;
    j["acl"] = report.acl;
    j["ssim"] = report.ssim;
    j["config"] = config_to_json(config);
    nlohmann::json per_image = nlohmann::json::array();
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        const ImageMetrics& m = metrics[i];
        per_image.push_back({{"stem", data.stems[i]},
                             {"tp", m.counts.tp},
                             {"fn", m.counts.fn},
                             {"fp", m.counts.fp},
                             {"f", m.f},
                             {"acl", m.acl},
                             {"ssim", m.ssim},
                             {"ac", m.ac}});
    }
    j["per_image"] = per_image;
    std::ofstream(out_dir / "metrics.json") << j.dump(2) << '\n';
    echo_config(out_dir, config);

    std::cout << "eval: " << metrics.size() << " images  F(dataset)="
              << f_measure(total) << "  ODS=" << report.ods << "  OIS="
              << report.ois << "  AC=" << report.ac << "  ACL=" << report.acl
              << "  SSIM=" << report.ssim << "\n";
    return 0;
}

int cmd_sweep_thresholds(const CommonOptions& o) {
    const PipelineConfig config = build_config(o);
    LoadedDataset data = load_pairs(o.dataset_dir, true);
    const fs::path out_dir(o.out_dir);
    ensure_dir(out_dir);

    const ThresholdSweepResult sweep =
        sweep_thresholds(data.images, data.truths, config, o.workers);

    std::ofstream csv(out_dir / "sweep.csv");
    csv << "index,high,low,tp,fn,fp,precision,recall,f\n";
    for (std::size_t k = 0; k < sweep.points.size(); ++k) {
        const ThresholdSweepPoint& point = sweep.points[k];
        ConfusionCounts total;
        for (const ConfusionCounts& c : point.per_image)
            total += c;
        csv << k << ',' << point.high << ',' << point.low << ',' << total.tp
            << ',' << total.fn << ',' << total.fp << ',' << precision(total)
            << ',' << recall(total) << ',' << point.dataset_f << "\n";
    }
    csv.close();

    nlohmann::json j;
    j["ods"] = sweep.ods;
    j["ois"] = sweep.ois;
    j["best_high"] = sweep.points[sweep.ods_index].high;
    j["best_low"] = sweep.points[sweep.ods_index].low;
    j["points"] = sweep.points.size();
    j["config"] = config_to_json(config);
    std::ofstream(out_dir / "sweep.json") << j.dump(2) << '\n';
    echo_config(out_dir, config);

    std::cout << "sweep-thresholds: ODS=" << sweep.ods << " at high="
              << sweep.points[sweep.ods_index].high << "  OIS=" << sweep.ois
              << "\n";
    return 0;
}

int cmd_sweep_weights(const CommonOptions& o, const std::string& protocol,
                      bool full_grid) {
    const PipelineConfig config = build_config(o);
    LoadedDataset data = load_pairs(o.dataset_dir, true);
    const fs::path out_dir(o.out_dir);
    ensure_dir(out_dir);

    WeightSweepResult result;
    std::vector<WeightSweepResult> per_image;
    if (protocol == "per-image") {
        result = sweep_weights_dataset(data.images, data.truths, config,
                                       full_grid, o.workers, &per_image);
    } else {
        result = sweep_weights_joint(data.images, data.truths, config, full_grid,
                                     o.workers);
    }

    std::ofstream csv(out_dir / "weights.csv");
    csv << "stem,a,b,c,d,f\n";
    if (protocol == "per-image") {
        for (std::size_t i = 0; i < per_image.size(); ++i) {
            const WeightSweepResult& r = per_image[i];
            csv << data.stems[i] << ',' << r.best.a << ',' << r.best.b << ','
                << r.best.c << ',' << r.best.d << ',' << r.best_f << "\n";
        }
    }
    csv << "(dataset)," << result.best.a << ',' << result.best.b << ','
        << result.best.c << ',' << result.best.d << ',' << result.best_f << "\n";
    csv.close();

    nlohmann::json j;
    j["protocol"] = protocol;
    j["full_grid"] = full_grid;
    j["best"] = {{"a", result.best.a},
                 {"b", result.best.b},
                 {"c", result.best.c},
                 {"d", result.best.d}};
    j["f"] = result.best_f;
    j["evaluations"] = result.evaluations;
    j["config"] = config_to_json(config);
    std::ofstream(out_dir / "weights.json") << j.dump(2) << '\n';
    echo_config(out_dir, config);

    std::cout << "sweep-weights (" << protocol << "): best a=" << result.best.a
              << " b=" << result.best.b << " c=" << result.best.c
              << " d=" << result.best.d << "  F=" << result.best_f << "\n";
    return 0;
}

int cmd_crossbar_bench(const CommonOptions& o, std::vector<double> noise_levels,
                       std::vector<int> sample_counts, int trials) {
    const PipelineConfig config = build_config(o);
    if (noise_levels.empty())
        noise_levels = o.noise ? std::vector<double>{*o.noise}
                               : std::vector<double>{0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
    if (sample_counts.empty())
        sample_counts = o.samples ? std::vector<int>{*o.samples}
                                  : std::vector<int>{1, 4, 16, 64, 144};

    std::cout << "noise,samples,mean_rel_error,max_rel_error\n";
    std::vector<std::string> rows;
    for (double noise : noise_levels) {
        for (int samples : sample_counts) {
            CrossbarConfig cfg = config.crossbar;
            cfg.noise_level = noise;
            cfg.samples_per_pulse = samples;
            const ReadoutErrorStats stats = readout_error(cfg, trials);
            std::ostringstream row;
            row << noise << ',' << samples << ',' << stats.mean_rel_error << ','
                << stats.max_rel_error;
            rows.push_back(row.str());
            std::cout << row.str() << "\n";
        }
    }
    if (!o.out_dir.empty()) {
        const fs::path out_dir(o.out_dir);
        ensure_dir(out_dir);
        std::ofstream csv(out_dir / "crossbar.csv");
        csv << "noise,samples,mean_rel_error,max_rel_error\n";
        for (const std::string& row : rows)
            csv << row << "\n";
        echo_config(out_dir, config);
    }
    return 0;
}

int cmd_throughput(const CommonOptions& o, std::uint64_t pixels, int width,
                   int height) {
    if (pixels == 0) {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument(
                "throughput: give a pixel count or --size WxH via --width/--height");
        pixels = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
    }
    const ThroughputModel model = default_throughput_model();
    const ThroughputEstimate est = estimate_throughput(pixels, model);
    std::cout << "pixels=" << pixels << "  seconds=" << est.seconds
              << "  fps=" << est.fps << "\n";
    if (!o.out_dir.empty()) {
        const fs::path out_dir(o.out_dir);
        ensure_dir(out_dir);
        std::ofstream csv(out_dir / "throughput.csv");
        csv << "pixels,seconds,fps\n";
        for (const auto& [px, sec] : model.anchors)
            csv << static_cast<std::uint64_t>(px) << ',' << sec << ',' << 1.0 / sec
                << "\n";
        csv << pixels << ',' << est.seconds << ',' << est.fps << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge detection via a convolutional state-space scanner with "
                 "edge-graph clean-up, evaluation metrics, and an analog "
                 "crossbar accelerator model"};
    app.require_subcommand(1);

    CommonOptions detect_opts;
    CLI::App* detect = app.add_subcommand("detect", "Run the pipeline and write edge maps");
    add_dataset_arg(detect, detect_opts);
    add_pipeline_flags(detect, detect_opts);

    CommonOptions eval_opts;
    CLI::App* eval = app.add_subcommand("eval", "Run the pipeline and score it against ground truth");
    add_dataset_arg(eval, eval_opts);
    add_pipeline_flags(eval, eval_opts);

    CommonOptions st_opts;
    CLI::App* st = app.add_subcommand(
        "sweep-thresholds", "Evaluate the 101-point hysteresis threshold grid");
    add_dataset_arg(st, st_opts);
    add_pipeline_flags(st, st_opts);

    CommonOptions sw_opts;
    std::string sw_protocol = "joint";
    bool sw_full_grid = false;
    CLI::App* sw = app.add_subcommand("sweep-weights",
                                      "Search the scan weights on the 0.1 grid");
    add_dataset_arg(sw, sw_opts);
    add_pipeline_flags(sw, sw_opts);
    sw->add_option("--weight-protocol", sw_protocol,
                   "joint (mean-F search) or per-image (argmax per image, "
                   "then the most frequent tuple)")
        ->check(CLI::IsMember({"joint", "per-image"}));
    sw->add_flag("--full-grid", sw_full_grid,
                 "Exhaustive 21^4 search instead of coordinate-wise");

    CommonOptions cb_opts;
    std::vector<double> cb_noise;
    std::vector<int> cb_samples;
    int cb_trials = 200;
    CLI::App* cb = app.add_subcommand(
        "crossbar-bench", "Monte-Carlo readout error of the analog simulator");
    add_pipeline_flags(cb, cb_opts);
    cb->add_option("--noise-levels", cb_noise, "Comma-separated noise levels")
        ->delimiter(',');
    cb->add_option("--sample-counts", cb_samples,
                   "Comma-separated samples-per-pulse counts")
        ->delimiter(',');
    cb->add_option("--trials", cb_trials, "Random instances per setting")
        ->check(CLI::PositiveNumber);

    CommonOptions tp_opts;
    std::uint64_t tp_pixels = 0;
    int tp_width = 0;
    int tp_height = 0;
    CLI::App* tp = app.add_subcommand("throughput",
                                      "Time-cost model for an image size");
    tp->add_option("pixels", tp_pixels, "Pixel count");
    tp->add_option("--width", tp_width, "Image width");
    tp->add_option("--height", tp_height, "Image height");
    tp->add_option("--out", tp_opts.out_dir, "Output directory");
    tp_opts.out_dir.clear();

    try {
        app.parse(argc, argv);
        if (detect->parsed())
            return cmd_detect(detect_opts);
        if (eval->parsed())
            return cmd_eval(eval_opts);
        if (st->parsed())
            return cmd_sweep_thresholds(st_opts);
        if (sw->parsed())
            return cmd_sweep_weights(sw_opts, sw_protocol, sw_full_grid);
        if (cb->parsed())
            return cmd_crossbar_bench(cb_opts, cb_noise, cb_samples, cb_trials);
        if (tp->parsed())
            return cmd_throughput(tp_opts, tp_pixels, tp_width, tp_height);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
