#include "edcssm/dataset.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <map>
#include <stdexcept>

#include "edcssm/image_io.hpp"

namespace fs = std::filesystem;

namespace edcssm {

namespace {

bool has_image_extension(const fs::path& p) {
    static constexpr std::array<const char*, 8> kExtensions{
        ".png", ".jpg", ".jpeg", ".bmp", ".pgm", ".ppm", ".tif", ".tiff"};
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return std::any_of(kExtensions.begin(), kExtensions.end(),
                       [&](const char* e) { return ext == e; });
}

std::map<std::string, fs::path> index_by_stem(const fs::path& dir) {
    std::map<std::string, fs::path> out;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || !has_image_extension(entry.path()))
            continue;
        const std::string stem = entry.path().stem().string();
        const auto [it, inserted] = out.emplace(stem, entry.path());
        if (!inserted)
            throw std::runtime_error("duplicate stem '" + stem + "' in " +
                                     dir.string());
    }
    return out;
}

} // namespace

DatasetManifest load_dataset(const std::string& dir) {
    const fs::path root(dir);
    if (!fs::is_directory(root))
        throw std::runtime_error("dataset directory not found: " + dir);
    const fs::path images_dir = root / "images";
    if (!fs::is_directory(images_dir))
        throw std::runtime_error("missing images/ subdirectory under: " + dir);

    DatasetManifest manifest;
    manifest.name = root.filename().string();
    if (manifest.name.empty())
        manifest.name = root.parent_path().filename().string();

    const std::map<std::string, fs::path> images = index_by_stem(images_dir);
    std::map<std::string, fs::path> truths;
    const fs::path gt_dir = root / "gt";
    if (fs::is_directory(gt_dir))
        truths = index_by_stem(gt_dir);

    for (const auto& [stem, image_path] : images) {
        DatasetEntry entry;
        entry.stem = stem;
        entry.image_path = image_path.string();
        const auto it = truths.find(stem);
        if (it != truths.end()) {
            entry.truth_path = it->second.string();
            const Grid image = load_grayscale(entry.image_path);
            const Grid truth = load_grayscale(*entry.truth_path);
            if (image.rows() != truth.rows() || image.cols() != truth.cols())
                throw std::runtime_error(
                    "ground truth dimensions do not match image: " +
                    *entry.truth_path);
        }
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

LoadedPair load_pair(const DatasetEntry& entry) {
    LoadedPair pair{entry.stem, load_grayscale(entry.image_path), std::nullopt};
    if (entry.truth_path) {
        pair.truth = load_binary(*entry.truth_path);
        if (pair.truth->rows() != pair.image.rows() ||
            pair.truth->cols() != pair.image.cols())
            throw std::runtime_error(
                "ground truth dimensions do not match image: " + *entry.truth_path);
    }
    return pair;
}

} // namespace edcssm
