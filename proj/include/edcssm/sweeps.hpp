#pragma once

#include <cstddef>
#include <vector>

#include "edcssm/metrics.hpp"
#include "edcssm/pipeline.hpp"

namespace edcssm {

// One hysteresis setting of the threshold sweep, with the confusion counts
// of every image at that setting and the dataset-level F of the summed
// counts.
struct ThresholdSweepPoint {
    double high = 0.0;
    double low = 0.0;
    std::vector<ConfusionCounts> per_image;
    double dataset_f = 0.0;
};

struct ThresholdSweepResult {
    std::vector<ThresholdSweepPoint> points;
    double ods = 0.0;
    std::size_t ods_index = 0; // index into points of the ODS optimum
    double ois = 0.0;
};

// Evaluates the 101-point threshold grid H in {0, 2.55, ..., 255} with
// L = 0.95*H on every image/ground-truth pair. The erosion stage is always
// disabled for the sweep; everything else follows `config`. Images are
// processed by up to `workers` threads; results are deterministic.
ThresholdSweepResult sweep_thresholds(const std::vector<Grid>& images,
                                      const std::vector<BinaryMap>& truths,
                                      const PipelineConfig& config,
                                      int workers = 1);

inline constexpr int kWeightGridPoints = 21; // {0.0, 0.1, ..., 2.0}

struct WeightSweepResult {
    SaimWeights best{};
    double best_f = 0.0;
    std::size_t evaluations = 0;
};

// Searches the scan weights (a, b, c, d) over the 21-point grid per weight,
// scoring each candidate by the F-measure of the full configured pipeline
// against the ground truth. Coordinate-wise by default (one ascending pass
// over a, then b, then c, then d, starting from the weights in `config`;
// ties keep the earlier candidate); `full_grid` switches to the exhaustive
// 21^4 search in lexicographic order. Candidate evaluations are spread over
// up to `workers` threads.
WeightSweepResult sweep_weights(const Grid& image, const BinaryMap& truth,
                                const PipelineConfig& config,
                                bool full_grid = false, int workers = 1);

// Same search over a whole dataset jointly, scoring each candidate by the
// mean F across all pairs.
WeightSweepResult sweep_weights_joint(const std::vector<Grid>& images,
                                      const std::vector<BinaryMap>& truths,
                                      const PipelineConfig& config,
                                      bool full_grid = false, int workers = 1);

// Per-image protocol: run the search on every pair independently, take the
// most frequent winning tuple across images (lexicographically smallest on
// ties), then report the mean F of all images re-evaluated at that tuple.
// `per_image` (optional) receives each image's own search result.
WeightSweepResult sweep_weights_dataset(const std::vector<Grid>& images,
                                        const std::vector<BinaryMap>& truths,
                                        const PipelineConfig& config,
                                        bool full_grid = false, int workers = 1,
                                        std::vector<WeightSweepResult>* per_image = nullptr);

} // namespace edcssm
