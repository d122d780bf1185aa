#include "edcssm/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace edcssm {

namespace {

int window_hits(const BinaryMap& map, int row, int col) {
    int hits = 0;
    for (int dr = -kConfusionWindowRadius; dr <= kConfusionWindowRadius; ++dr) {
        for (int dc = -kConfusionWindowRadius; dc <= kConfusionWindowRadius; ++dc) {
            const int rr = row + dr;
            const int cc = col + dc;
            if (map.in_bounds(rr, cc) && map.is_edge(rr, cc))
                ++hits;
        }
    }
    return hits;
}

} // namespace

ConfusionCounts count_confusion(const BinaryMap& predicted, const BinaryMap& truth) {
    if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols())
        throw std::invalid_argument("count_confusion: shape mismatch");
    ConfusionCounts counts;
    for (int r = 0; r < truth.rows(); ++r) {
        for (int c = 0; c < truth.cols(); ++c) {
            const int hits = window_hits(predicted, r, c);
            if (truth.is_edge(r, c)) {
                if (hits >= kConfusionMinHits && hits <= kConfusionMaxHits)
                    ++counts.tp;
                else
                    ++counts.fn;
            } else if (hits >= kConfusionMaxHits) {
                ++counts.fp;
            }
        }
    }
    return counts;
}

double precision(const ConfusionCounts& counts) {
    const double denom = static_cast<double>(counts.tp + counts.fp);
    return denom > 0.0 ? static_cast<double>(counts.tp) / denom : 0.0;
}

double recall(const ConfusionCounts& counts) {
    const double denom = static_cast<double>(counts.tp + counts.fn);
    return denom > 0.0 ? static_cast<double>(counts.tp) / denom : 0.0;
}

double f_measure(const ConfusionCounts& counts) {
    const double p = precision(counts);
    const double r = recall(counts);
    return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

double ods_f(const std::vector<std::vector<ConfusionCounts>>& counts,
             std::size_t* best_index) {
    if (counts.empty())
        throw std::invalid_argument("ods_f: empty sweep");
    const std::size_t images = counts.front().size();
    double best = -1.0;
    std::size_t best_t = 0;
    for (std::size_t t = 0; t < counts.size(); ++t) {
        if (counts[t].size() != images)
            throw std::invalid_argument("ods_f: ragged sweep table");
        ConfusionCounts total;
        for (const ConfusionCounts& c : counts[t])
            total += c;
        const double f = f_measure(total);
        if (f > best) {
            best = f;
            best_t = t;
        }
    }
    if (best_index)
        *best_index = best_t;
    return best;
}

double ois_f(const std::vector<std::vector<ConfusionCounts>>& counts) {
    if (counts.empty())
        throw std::invalid_argument("ois_f: empty sweep");
    const std::size_t images = counts.front().size();
    for (const auto& row : counts)
        if (row.size() != images)
            throw std::invalid_argument("ois_f: ragged sweep table");
    if (images == 0)
        throw std::invalid_argument("ois_f: no images");
    double total = 0.0;
    for (std::size_t i = 0; i < images; ++i) {
        double best = 0.0;
        for (std::size_t t = 0; t < counts.size(); ++t)
            best = std::max(best, f_measure(counts[t][i]));
        total += best;
    }
    return total / static_cast<double>(images);
}

double average_contour_length(const BinaryMap& map) {
    if (map.edge_count() == 0)
        return 0.0;
    std::vector<std::uint8_t> visited(static_cast<std::size_t>(map.rows()) * map.cols(), 0);
    const auto visited_at = [&](int r, int c) -> std::uint8_t& {
        return visited[static_cast<std::size_t>(r) * map.cols() + c];
    };
    std::size_t components = 0;
    std::size_t pixels = 0;
    for (int r = 0; r < map.rows(); ++r) {
        for (int c = 0; c < map.cols(); ++c) {
            if (!map.is_edge(r, c) || visited_at(r, c))
                continue;
            ++components;
            std::queue<PixelCoord> frontier;
            frontier.push({r, c});
            visited_at(r, c) = 1;
            while (!frontier.empty()) {
                const PixelCoord p = frontier.front();
                frontier.pop();
                ++pixels;
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        if (dr == 0 && dc == 0)
                            continue;
                        const int rr = p.row + dr;
                        const int cc = p.col + dc;
                        if (map.in_bounds(rr, cc) && map.is_edge(rr, cc) &&
                            !visited_at(rr, cc)) {
                            visited_at(rr, cc) = 1;
                            frontier.push({rr, cc});
                        }
                    }
                }
            }
        }
    }
    return static_cast<double>(pixels) / static_cast<double>(components);
}

double ssim(const Grid& a, const Grid& b, double data_range) {
    if (!a.same_shape(b))
        throw std::invalid_argument("ssim: shape mismatch");
    constexpr int kWindow = 11;
    constexpr double kSigma = 1.5;
    if (a.rows() < kWindow || a.cols() < kWindow)
        throw std::invalid_argument("ssim: image smaller than the 11x11 window");
    if (!(data_range > 0.0))
        throw std::invalid_argument("ssim: data_range must be positive");

    // Normalised 2-D Gaussian weights.
    std::array<double, kWindow> g{};
    double gsum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
        const double x = i - (kWindow - 1) / 2.0;
        g[static_cast<std::size_t>(i)] = std::exp(-x * x / (2.0 * kSigma * kSigma));
        gsum += g[static_cast<std::size_t>(i)];
    }
    for (double& w : g)
        w /= gsum;

    const double c1 = (0.01 * data_range) * (0.01 * data_range);
    const double c2 = (0.03 * data_range) * (0.03 * data_range);

    double total = 0.0;
    std::size_t windows = 0;
    for (int r = 0; r + kWindow <= a.rows(); ++r) {
        for (int c = 0; c + kWindow <= a.cols(); ++c) {
            double mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
            for (int i = 0; i < kWindow; ++i) {
                for (int j = 0; j < kWindow; ++j) {
                    const double w = g[static_cast<std::size_t>(i)] *
                                     g[static_cast<std::size_t>(j)];
                    const double va = a(r + i, c + j);
                    const double vb = b(r + i, c + j);
                    mu_a += w * va;
                    mu_b += w * vb;
                    aa += w * va * va;
                    bb += w * vb * vb;
                    ab += w * va * vb;
                }
            }
            const double var_a = aa - mu_a * mu_a;
            const double var_b = bb - mu_b * mu_b;
            const double cov = ab - mu_a * mu_b;
            const double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
            const double den =
                (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
            total += num / den;
            ++windows;
        }
    }
    return total / static_cast<double>(windows);
}

double area_coverage(const BinaryMap& predicted, const BinaryMap& truth) {
    const std::size_t predicted_edges = predicted.edge_count();
    if (predicted_edges == 0)
        return 0.0;
    const ConfusionCounts counts = count_confusion(predicted, truth);
    return static_cast<double>(counts.tp) / static_cast<double>(predicted_edges);
}

namespace {

Grid to_intensity(const BinaryMap& map) {
    Grid g(map.rows(), map.cols());
    for (int r = 0; r < map.rows(); ++r)
        for (int c = 0; c < map.cols(); ++c)
            g(r, c) = map.is_edge(r, c) ? 255.0 : 0.0;
    return g;
}

} // namespace

double ssim(const BinaryMap& a, const BinaryMap& b) {
    return ssim(to_intensity(a), to_intensity(b), 255.0);
}

std::pair<double, double> ods_ois(
    const std::vector<std::vector<ConfusionCounts>>& counts) {
    return {ods_f(counts), ois_f(counts)};
}

ImageMetrics evaluate_image(const BinaryMap& predicted, const BinaryMap& truth) {
    ImageMetrics m;
    m.counts = count_confusion(predicted, truth);
    m.f = f_measure(m.counts);
    m.acl = average_contour_length(predicted);
    m.ssim = ssim(predicted, truth);
    m.ac = area_coverage(predicted, truth);
    return m;
}

} // namespace edcssm
