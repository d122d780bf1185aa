#pragma once

#include <optional>
#include <string>
#include <vector>

#include "edcssm/grid.hpp"

namespace edcssm {

struct DatasetEntry {
    std::string stem;
    std::string image_path;
    std::optional<std::string> truth_path;
};

struct DatasetManifest {
    std::string name;
    std::vector<DatasetEntry> entries;

    bool has_truth() const {
        for (const DatasetEntry& e : entries)
            if (!e.truth_path)
                return false;
        return !entries.empty();
    }
};

// Scans `dir` for an `images/` subdirectory (required) and a `gt/`
// subdirectory (optional); entries pair files by stem, sorted by stem.
// Every ground-truth file must match its image's dimensions — violations
// raise std::runtime_error naming the file.
DatasetManifest load_dataset(const std::string& dir);

struct LoadedPair {
    std::string stem;
    Grid image;
    std::optional<BinaryMap> truth;
};

// Loads the pixels behind one manifest entry (ground truth binarized at
// luminance > 127).
LoadedPair load_pair(const DatasetEntry& entry);

} // namespace edcssm
