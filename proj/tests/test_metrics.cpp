// Tolerant confusion counting and the derived quality scores.
#include <doctest.h>

#include "edcssm/metrics.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

using namespace edcssm;

namespace {

// Independent nested-loop reimplementation of the windowed counting rule,
// used as an oracle against the library version.
ConfusionCounts brute_confusion(const BinaryMap& pred, const BinaryMap& truth) {
    ConfusionCounts counts;
    for (int r = 0; r < truth.rows(); ++r) {
        for (int c = 0; c < truth.cols(); ++c) {
            int hits = 0;
            for (int dr = -kConfusionWindowRadius; dr <= kConfusionWindowRadius; ++dr)
                for (int dc = -kConfusionWindowRadius; dc <= kConfusionWindowRadius; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr >= 0 && rr < pred.rows() && cc >= 0 && cc < pred.cols() &&
                        pred.is_edge(rr, cc))
                        ++hits;
                }
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

BinaryMap random_map(int rows, int cols, std::uint64_t seed, double density) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution d(density);
    BinaryMap m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (d(rng))
                m.set(r, c, 255);
    return m;
}

BinaryMap line_map() {
    BinaryMap m(12, 12); // large enough for the 11x11 similarity window
    for (int c = 1; c <= 5; ++c)
        m.set(2, c, 255);
    return m;
}

} // namespace

TEST_CASE("confusion counting matches a brute-force oracle on random maps") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const double dp = 0.05 + 0.01 * static_cast<double>(seed % 30);
        BinaryMap pred = random_map(16, 16, 1000 + seed, dp);
        BinaryMap truth = random_map(16, 16, 2000 + seed, 0.25);
        const ConfusionCounts got = count_confusion(pred, truth);
        const ConfusionCounts want = brute_confusion(pred, truth);
        INFO("seed ", seed);
        CHECK(got == want);
    }
}

TEST_CASE("confusion counting hand cases") {
    SUBCASE("a lone matching pixel cannot reach the hit floor") {
        BinaryMap one(6, 6);
        one.set(2, 2, 255);
        const ConfusionCounts c = count_confusion(one, one);
        CHECK(c == ConfusionCounts{0, 1, 0});
    }
    SUBCASE("a five-pixel line matches itself everywhere, even clipped") {
        const ConfusionCounts c = count_confusion(line_map(), line_map());
        CHECK(c == ConfusionCounts{5, 0, 0});
    }
    SUBCASE("an off-by-one-diagonal prediction misses a lone truth pixel") {
        BinaryMap truth(6, 6), pred(6, 6);
        truth.set(2, 2, 255);
        pred.set(3, 3, 255);
        const ConfusionCounts c = count_confusion(pred, truth);
        CHECK(c == ConfusionCounts{0, 1, 0});
    }
    SUBCASE("a dense blob floods non-edge windows into false positives") {
        BinaryMap truth(6, 6), pred(6, 6);
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c)
                pred.set(r, c, 255);
        const ConfusionCounts c = count_confusion(pred, truth);
        CHECK(c.fp > 0);
        CHECK(c == brute_confusion(pred, truth));
    }
}

TEST_CASE("confusion counting rejects shape mismatches") {
    CHECK_THROWS_AS(count_confusion(BinaryMap(4, 4), BinaryMap(4, 5)),
                    std::invalid_argument);
}

TEST_CASE("precision, recall, and F behave at the boundaries") {
    CHECK(f_measure({0, 0, 0}) == 0.0);
    CHECK(precision({0, 5, 3}) == 0.0);
    CHECK(recall({0, 5, 3}) == 0.0);
    CHECK(f_measure({0, 5, 3}) == 0.0);
    CHECK(precision({8, 2, 2}) == doctest::Approx(0.8));
    CHECK(recall({8, 2, 2}) == doctest::Approx(0.8));
    CHECK(f_measure({8, 2, 2}) == doctest::Approx(0.8));
    // Asymmetric: P = 1/2, R = 3/4 -> F = 0.6
    CHECK(f_measure({3, 1, 3}) == doctest::Approx(0.6));
}

TEST_CASE("dataset-optimal and image-optimal scores on a hand table") {
    // counts[threshold][image]
    const std::vector<std::vector<ConfusionCounts>> table = {
        {{8, 2, 2}, {2, 8, 0}},
        {{6, 4, 0}, {9, 1, 9}},
    };
    std::size_t best = 99;
    const double ods = ods_f(table, &best);
    // t0 summed: 10tp 10fn 2fp -> F = 0.625; t1: 15tp 5fn 9fp -> F = 15/22.
    CHECK(ods == doctest::Approx(0.6818181818));
    CHECK(best == 1);
    // Image 0 peaks at t0 (0.8), image 1 at t1 (9/14).
    const double ois = ois_f(table);
    CHECK(ois == doctest::Approx((0.8 + 9.0 / 14.0) / 2.0));
    const auto [o1, o2] = ods_ois(table);
    CHECK(o1 == doctest::Approx(ods));
    CHECK(o2 == doctest::Approx(ois));
}

TEST_CASE("score tables are validated and ties go to the earliest threshold") {
    CHECK_THROWS_AS(ods_f({}), std::invalid_argument);
    CHECK_THROWS_AS(ois_f({}), std::invalid_argument);
    const std::vector<std::vector<ConfusionCounts>> ragged = {
        {{1, 1, 1}, {1, 1, 1}},
        {{1, 1, 1}},
    };
    CHECK_THROWS_AS(ods_f(ragged), std::invalid_argument);
    CHECK_THROWS_AS(ois_f(ragged), std::invalid_argument);

    const std::vector<std::vector<ConfusionCounts>> tie = {
        {{4, 1, 1}},
        {{4, 1, 1}},
    };
    std::size_t best = 99;
    ods_f(tie, &best);
    CHECK(best == 0);
}

TEST_CASE("average contour length over eight-connected components") {
    BinaryMap m(8, 8);
    CHECK(average_contour_length(m) == 0.0);

    // Diagonal chain of 3 is one component.
    m.set(0, 0, 255);
    m.set(1, 1, 255);
    m.set(2, 2, 255);
    CHECK(average_contour_length(m) == doctest::Approx(3.0));

    // Add a separate component of 5.
    m.set(5, 5, 255);
    m.set(5, 6, 255);
    m.set(6, 5, 255);
    m.set(4, 6, 255);
    m.set(3, 6, 255);
    CHECK(average_contour_length(m) == doctest::Approx(4.0));
}

TEST_CASE("structural similarity: identity, symmetry, and a closed-form case") {
    Grid a(12, 12);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(0.0, 255.0);
    for (double& v : a.data())
        v = d(rng);
    CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));

    Grid b(12, 12);
    for (double& v : b.data())
        v = d(rng);
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
    CHECK(ssim(a, b) < 1.0);

    // Two constant images: variances vanish, the score reduces to
    // (2*100*150 + C1) / (100^2 + 150^2 + C1) with C1 = (0.01*255)^2.
    Grid c1(11, 11, 100.0);
    Grid c2(11, 11, 150.0);
    CHECK(ssim(c1, c2) == doctest::Approx(0.923092310530793).epsilon(1e-9));
}

TEST_CASE("structural similarity needs at least one full window") {
    CHECK_THROWS_AS(ssim(Grid(10, 11), Grid(10, 11)), std::invalid_argument);
    CHECK_THROWS_AS(ssim(Grid(11, 11), Grid(11, 12)), std::invalid_argument);
    CHECK_NOTHROW(ssim(Grid(11, 11), Grid(11, 11)));
}

TEST_CASE("binary-map similarity wraps the intensity version") {
    BinaryMap m = line_map();
    CHECK(ssim(m, m) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("area coverage is the matched share of predicted pixels") {
    BinaryMap truth = line_map();
    CHECK(area_coverage(BinaryMap(6, 6), truth) == 0.0);
    CHECK(area_coverage(truth, truth) == doctest::Approx(1.0));

    BinaryMap extra = line_map();
    extra.set(5, 0, 255); // far-away stray: tp stays 5, denominator grows
    CHECK(area_coverage(extra, truth) == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("per-image evaluation bundles the individual scores") {
    BinaryMap pred = line_map();
    BinaryMap truth = line_map();
    const ImageMetrics m = evaluate_image(pred, truth);
    CHECK(m.counts == count_confusion(pred, truth));
    CHECK(m.f == doctest::Approx(f_measure(m.counts)));
    CHECK(m.acl == doctest::Approx(average_contour_length(pred)));
    CHECK(m.ssim == doctest::Approx(ssim(pred, truth)));
    CHECK(m.ac == doctest::Approx(area_coverage(pred, truth)));
    CHECK(m.f == doctest::Approx(1.0));
}
