// End-to-end driver for the command-line tool: runs the real binary against
// a freshly written dataset and checks the emitted reports. The path to the
// binary arrives as argv[1].
#include "edcssm/config_io.hpp"
#include "edcssm/image_io.hpp"
#include "edcssm/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace edcssm;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        std::printf("FAIL  %s\n", what.c_str());
    }
}

int run(const std::string& cmd) {
    std::printf("+ %s\n", cmd.c_str());
    std::fflush(stdout);
    return std::system(cmd.c_str());
}

std::size_t line_count(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty())
            ++n;
    return n;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

Grid step_image() {
    Grid g(32, 32, 40.0);
    for (int r = 0; r < 32; ++r)
        for (int c = 16; c < 32; ++c)
            g(r, c) = 200.0;
    return g;
}

Grid blob_image() {
    Grid g(40, 40, 70.0);
    for (int r = 10; r < 30; ++r)
        for (int c = 12; c < 34; ++c)
            g(r, c) = 190.0;
    return g;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::printf("usage: %s <cli-binary>\n", argv[0]);
        return 1;
    }
    const std::string cli = std::string("\"") + argv[1] + "\"";
    const fs::path root = fs::temp_directory_path() / "edcssm-cli-driver";
    fs::remove_all(root);
    fs::create_directories(root / "ds" / "images");
    fs::create_directories(root / "ds" / "gt");

    // The requested configuration, mirrored in-process to build ground truth
    // and to predict the tool's outputs.
    PipelineConfig cfg;
    cfg.scan.weights = {0.0, 1.0, 0.0, 1.0};
    cfg.erosion_enabled = false;

    const std::vector<std::pair<std::string, Grid>> pairs = {
        {"blob", blob_image()}, {"step", step_image()}};
    for (const auto& [stem, img] : pairs) {
        save_grayscale((root / "ds" / "images" / (stem + ".png")).string(), img);
        save_binary((root / "ds" / "gt" / (stem + ".png")).string(),
                    run_pipeline(img, cfg).final_edges);
    }

    const std::string ds = (root / "ds").string();
    const std::string flags = " --weights 0,1,0,1 --erosion off";

    // detect: edge maps plus an echoed config.
    {
        const std::string out = (root / "detect").string();
        expect(run(cli + " detect \"" + ds + "\" --out \"" + out + "\"" +
                   flags) == 0,
               "detect exits cleanly");
        for (const auto& [stem, img] : pairs) {
            const fs::path edge = fs::path(out) / "edges" / (stem + ".png");
            expect(fs::exists(edge), "detect wrote " + stem + ".png");
            const BinaryMap loaded = load_binary(edge.string());
            expect(loaded == run_pipeline(img, cfg).final_edges,
                   "written edge map round-trips for " + stem);
        }
        const nlohmann::json echoed =
            nlohmann::json::parse(slurp(fs::path(out) / "config.json"));
        expect(config_from_json(echoed) == cfg,
               "echoed config.json reproduces the effective configuration");
    }

    // detect twice: byte-identical artifacts.
    {
        const std::string out2 = (root / "detect2").string();
        expect(run(cli + " detect \"" + ds + "\" --out \"" + out2 + "\"" +
                   flags) == 0,
               "second detect exits cleanly");
        for (const auto& [stem, img] : pairs)
            expect(slurp(root / "detect" / "edges" / (stem + ".png")) ==
                       slurp(fs::path(out2) / "edges" / (stem + ".png")),
                   "re-run produces byte-identical " + stem + ".png");
    }

    // eval: one CSV row per image plus a JSON report embedding the config.
    {
        const std::string out = (root / "eval").string();
        expect(run(cli + " eval \"" + ds + "\" --out \"" + out + "\"" +
                   flags) == 0,
               "eval exits cleanly");
        expect(line_count(fs::path(out) / "metrics.csv") == pairs.size() + 1,
               "metrics.csv has one row per image plus a header");
        const nlohmann::json report =
            nlohmann::json::parse(slurp(fs::path(out) / "metrics.json"));
        expect(report.contains("config") &&
                   config_from_json(report.at("config")) == cfg,
               "metrics.json embeds the full effective configuration");
        expect(report.at("per_image").size() == pairs.size(),
               "metrics.json lists every image");
        expect(report.at("ods").get<double>() == 1.0,
               "self-generated ground truth scores ODS 1.0");
    }

    // sweep-thresholds: the full 101-point grid.
    {
        const std::string out = (root / "sweep").string();
        expect(run(cli + " sweep-thresholds \"" + ds + "\" --out \"" + out +
                   "\" --weights 0,1,0,1") == 0,
               "sweep-thresholds exits cleanly");
        expect(line_count(fs::path(out) / "sweep.csv") == 102,
               "sweep.csv has 101 grid rows plus a header");
    }

    if (g_failures == 0)
        std::printf("cli driver: all checks passed\n");
    return g_failures;
}
