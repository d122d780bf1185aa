#include "edcssm/sweeps.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "edcssm/parallel.hpp"

namespace edcssm {

namespace {

void validate_pairs(const std::vector<Grid>& images,
                    const std::vector<BinaryMap>& truths) {
    if (images.empty())
        throw std::invalid_argument("sweep: no images");
    if (images.size() != truths.size())
        throw std::invalid_argument("sweep: image/ground-truth count mismatch");
    for (std::size_t i = 0; i < images.size(); ++i)
        if (images[i].rows() != truths[i].rows() ||
            images[i].cols() != truths[i].cols())
            throw std::invalid_argument(
                "sweep: image/ground-truth shape mismatch at index " +
                std::to_string(i));
}

} // namespace

ThresholdSweepResult sweep_thresholds(const std::vector<Grid>& images,
                                      const std::vector<BinaryMap>& truths,
                                      const PipelineConfig& config,
                                      int workers) {
    validate_pairs(images, truths);
    PipelineConfig sweep_config = config;
    sweep_config.erosion_enabled = false;

    constexpr int kPoints = 101;
    ThresholdSweepResult result;
    result.points.resize(kPoints);
    for (int k = 0; k < kPoints; ++k) {
        result.points[static_cast<std::size_t>(k)].high = 255.0 * k / 100.0;
        result.points[static_cast<std::size_t>(k)].low =
            0.95 * result.points[static_cast<std::size_t>(k)].high;
        result.points[static_cast<std::size_t>(k)].per_image.resize(images.size());
    }

    parallel_for(images.size(), workers, [&](std::size_t i) {
        const Grid suppressed = suppressed_magnitude(images[i], sweep_config);
        for (int k = 0; k < kPoints; ++k) {
            ThresholdSweepPoint& point = result.points[static_cast<std::size_t>(k)];
            const BinaryMap edges =
                hysteresis_threshold(suppressed, {point.high, point.low});
            point.per_image[i] = count_confusion(edges, truths[i]);
        }
    });

    std::vector<std::vector<ConfusionCounts>> table;
    table.reserve(result.points.size());
    for (ThresholdSweepPoint& point : result.points) {
        ConfusionCounts total;
        for (const ConfusionCounts& c : point.per_image)
            total += c;
        point.dataset_f = f_measure(total);
        table.push_back(point.per_image);
    }
    result.ods = ods_f(table, &result.ods_index);
    result.ois = ois_f(table);
    return result;
}

namespace {

double grid_value(int index) { return static_cast<double>(index) / 10.0; }

int nearest_grid_index(double value) {
    const int index = static_cast<int>(std::lround(value * 10.0));
    return std::clamp(index, 0, kWeightGridPoints - 1);
}

double score_weights(const Grid& image, const BinaryMap& truth,
                     PipelineConfig config, const SaimWeights& weights) {
    config.scan.weights = weights;
    const PipelineResult run = run_pipeline(image, config);
    return f_measure(count_confusion(run.final_edges, truth));
}

double mean_score(const std::vector<Grid>& images,
                  const std::vector<BinaryMap>& truths,
                  const PipelineConfig& config, const SaimWeights& weights) {
    double total = 0.0;
    for (std::size_t i = 0; i < images.size(); ++i)
        total += score_weights(images[i], truths[i], config, weights);
    return total / static_cast<double>(images.size());
}

WeightSweepResult search_weights(const std::vector<Grid>& images,
                                 const std::vector<BinaryMap>& truths,
                                 const PipelineConfig& config, bool full_grid,
                                 int workers) {
    WeightSweepResult result;
    if (!full_grid) {
        std::array<int, 4> current{nearest_grid_index(config.scan.weights.a),
                                   nearest_grid_index(config.scan.weights.b),
                                   nearest_grid_index(config.scan.weights.c),
                                   nearest_grid_index(config.scan.weights.d)};
        const auto to_weights = [](const std::array<int, 4>& idx) {
            return SaimWeights{grid_value(idx[0]), grid_value(idx[1]),
                               grid_value(idx[2]), grid_value(idx[3])};
        };
        double best_f = 0.0;
        for (int coord = 0; coord < 4; ++coord) {
            std::vector<double> scores(kWeightGridPoints);
            parallel_for(kWeightGridPoints, workers, [&](std::size_t k) {
                std::array<int, 4> candidate = current;
                candidate[static_cast<std::size_t>(coord)] = static_cast<int>(k);
                scores[k] = mean_score(images, truths, config, to_weights(candidate));
            });
            result.evaluations += kWeightGridPoints * images.size();
            // First best wins ties along the ascending grid.
            int best_k = 0;
            for (int k = 1; k < kWeightGridPoints; ++k)
                if (scores[static_cast<std::size_t>(k)] >
                    scores[static_cast<std::size_t>(best_k)])
                    best_k = k;
            current[static_cast<std::size_t>(coord)] = best_k;
            best_f = scores[static_cast<std::size_t>(best_k)];
        }
        result.best = to_weights(current);
        result.best_f = best_f;
        return result;
    }

    // Exhaustive 21^4 search, lexicographic; first best wins ties.
    const std::size_t total = static_cast<std::size_t>(kWeightGridPoints) *
                              kWeightGridPoints * kWeightGridPoints *
                              kWeightGridPoints;
    const auto unflatten = [](std::size_t flat) {
        std::array<int, 4> idx{};
        idx[3] = static_cast<int>(flat % kWeightGridPoints);
        flat /= kWeightGridPoints;
        idx[2] = static_cast<int>(flat % kWeightGridPoints);
        flat /= kWeightGridPoints;
        idx[1] = static_cast<int>(flat % kWeightGridPoints);
        idx[0] = static_cast<int>(flat / kWeightGridPoints);
        return idx;
    };
    std::vector<double> scores(total);
    parallel_for(total, workers, [&](std::size_t flat) {
        const std::array<int, 4> idx = unflatten(flat);
        scores[flat] = mean_score(images, truths, config,
                                  SaimWeights{grid_value(idx[0]), grid_value(idx[1]),
                                              grid_value(idx[2]), grid_value(idx[3])});
    });
    result.evaluations = total * images.size();
    std::size_t best_flat = 0;
    for (std::size_t flat = 1; flat < total; ++flat)
        if (scores[flat] > scores[best_flat])
            best_flat = flat;
    const std::array<int, 4> idx = unflatten(best_flat);
    result.best = SaimWeights{grid_value(idx[0]), grid_value(idx[1]),
                              grid_value(idx[2]), grid_value(idx[3])};
    result.best_f = scores[best_flat];
    return result;
}

} // namespace

WeightSweepResult sweep_weights(const Grid& image, const BinaryMap& truth,
                                const PipelineConfig& config, bool full_grid,
                                int workers) {
    if (image.rows() != truth.rows() || image.cols() != truth.cols())
        throw std::invalid_argument("sweep_weights: image/ground-truth shape mismatch");
    return search_weights({image}, {truth}, config, full_grid, workers);
}

WeightSweepResult sweep_weights_joint(const std::vector<Grid>& images,
                                      const std::vector<BinaryMap>& truths,
                                      const PipelineConfig& config,
                                      bool full_grid, int workers) {
    validate_pairs(images, truths);
    return search_weights(images, truths, config, full_grid, workers);
}

WeightSweepResult sweep_weights_dataset(const std::vector<Grid>& images,
                                        const std::vector<BinaryMap>& truths,
                                        const PipelineConfig& config,
                                        bool full_grid, int workers,
                                        std::vector<WeightSweepResult>* per_image) {
    validate_pairs(images, truths);

    std::vector<WeightSweepResult> searches(images.size());
    std::size_t evaluations = 0;
    // Images sequentially, workers inside each search: deterministic and
    // keeps the candidate grid spread across threads regardless of dataset
    // size.
    for (std::size_t i = 0; i < images.size(); ++i) {
        searches[i] = sweep_weights(images[i], truths[i], config, full_grid, workers);
        evaluations += searches[i].evaluations;
    }

    // Most frequent winning tuple; lexicographically smallest on ties.
    std::map<std::array<int, 4>, int> votes;
    for (const WeightSweepResult& r : searches) {
        const std::array<int, 4> key{
            nearest_grid_index(r.best.a), nearest_grid_index(r.best.b),
            nearest_grid_index(r.best.c), nearest_grid_index(r.best.d)};
        ++votes[key];
    }
    std::array<int, 4> mode = votes.begin()->first;
    int mode_votes = votes.begin()->second;
    for (const auto& [key, n] : votes) {
        if (n > mode_votes) { // map order makes earlier keys win ties
            mode = key;
            mode_votes = n;
        }
    }

    WeightSweepResult result;
    result.best = SaimWeights{grid_value(mode[0]), grid_value(mode[1]),
                              grid_value(mode[2]), grid_value(mode[3])};
    std::vector<double> scores(images.size());
    parallel_for(images.size(), workers, [&](std::size_t i) {
        scores[i] = score_weights(images[i], truths[i], config, result.best);
    });
    evaluations += images.size();
    double total = 0.0;
    for (double f : scores)
        total += f;
    result.best_f = total / static_cast<double>(images.size());
    result.evaluations = evaluations;
    if (per_image)
        *per_image = std::move(searches);
    return result;
}

} // namespace edcssm
