#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "edcssm/grid.hpp"

namespace edcssm {

// Tolerant confusion counts over 5x5 neighbourhoods (clipped at the image
// border). A ground-truth edge pixel counts as detected when the predicted
// map lights between min_hits and max_hits pixels of its neighbourhood; a
// ground-truth background pixel counts as a false positive when the predicted
// map saturates the neighbourhood (>= max_hits).
struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fn = 0;
    std::size_t fp = 0;

    ConfusionCounts& operator+=(const ConfusionCounts& other) {
        tp += other.tp;
        fn += other.fn;
        fp += other.fp;
        return *this;
    }
    friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) {
        a += b;
        return a;
    }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

inline constexpr int kConfusionWindowRadius = 2;
inline constexpr int kConfusionMinHits = 3;
inline constexpr int kConfusionMaxHits = 12;

ConfusionCounts count_confusion(const BinaryMap& predicted, const BinaryMap& truth);

// Precision tp/(tp+fp), recall tp/(tp+fn), F = 2PR/(P+R); each is 0 when its
// denominator vanishes.
double precision(const ConfusionCounts& counts);
double recall(const ConfusionCounts& counts);
double f_measure(const ConfusionCounts& counts);

// Dataset-level scores over a threshold sweep. `counts[t][i]` holds the
// confusion counts of image i at threshold setting t (every row must list
// the same number of images).
//
// - ods_f: pick the single threshold that maximises the F-measure of the
//   summed counts; returns that best F (first index wins ties; optional
//   out-params receive the index).
// - ois_f: per image, take the best threshold for that image alone, then
//   average the per-image best F values.
double ods_f(const std::vector<std::vector<ConfusionCounts>>& counts,
             std::size_t* best_index = nullptr);
double ois_f(const std::vector<std::vector<ConfusionCounts>>& counts);

// Mean size (in pixels) of the 8-connected components of the edge map;
// 0 when the map has no edge pixels.
double average_contour_length(const BinaryMap& map);

// Structural similarity with the standard 11x11 Gaussian window
// (sigma = 1.5), evaluated over fully interior windows only and averaged.
// Throws std::invalid_argument when the images differ in shape or either
// dimension is smaller than the window.
double ssim(const Grid& a, const Grid& b, double data_range = 255.0);

// Fraction of predicted edge pixels that hit ground-truth structure:
// TP / (number of predicted edge pixels); 0 when nothing is predicted.
double area_coverage(const BinaryMap& predicted, const BinaryMap& truth);

// Binary-map convenience: SSIM of the two maps viewed as 0/255 intensity
// images.
double ssim(const BinaryMap& a, const BinaryMap& b);

// Both dataset scores of a sweep table in one call.
std::pair<double, double> ods_ois(
    const std::vector<std::vector<ConfusionCounts>>& counts);

// Per-image summary of a prediction against its ground truth.
struct ImageMetrics {
    ConfusionCounts counts;
    double f = 0.0;
    double acl = 0.0;  // average contour length of the prediction
    double ssim = 0.0; // structural similarity against the ground truth
    double ac = 0.0;   // area coverage
};

ImageMetrics evaluate_image(const BinaryMap& predicted, const BinaryMap& truth);

// Dataset-level roll-up: ac/acl/ssim are means of the per-image values;
// ods/ois come from whatever threshold grid produced the entries (a single
// fixed threshold behaves as a one-point sweep).
struct MetricsReport {
    double ods = 0.0;
    double ois = 0.0;
    double ac = 0.0;
    double acl = 0.0;
    double ssim = 0.0;
    std::vector<ImageMetrics> per_image;
};

} // namespace edcssm
