#include "edcssm/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace edcssm {

Grid load_grayscale(const std::string& path) {
    const cv::Mat raw = cv::imread(path, cv::IMREAD_UNCHANGED);
    if (raw.empty())
        throw std::runtime_error("cannot read image: " + path);
    if (raw.depth() != CV_8U)
        throw std::runtime_error("unsupported bit depth (want 8-bit): " + path);

    Grid out(raw.rows, raw.cols);
    if (raw.channels() == 1) {
        for (int r = 0; r < raw.rows; ++r)
            for (int c = 0; c < raw.cols; ++c)
                out(r, c) = static_cast<double>(raw.at<std::uint8_t>(r, c));
        return out;
    }
    if (raw.channels() == 3 || raw.channels() == 4) {
        for (int r = 0; r < raw.rows; ++r) {
            for (int c = 0; c < raw.cols; ++c) {
                // OpenCV stores channels as B, G, R(, A).
                const std::uint8_t* px = raw.ptr<std::uint8_t>(r) + c * raw.channels();
                out(r, c) = 0.114 * px[0] + 0.587 * px[1] + 0.299 * px[2];
            }
        }
        return out;
    }
    throw std::runtime_error("unsupported channel count: " + path);
}

BinaryMap load_binary(const std::string& path, double threshold) {
    const Grid gray = load_grayscale(path);
    BinaryMap map(gray.rows(), gray.cols());
    for (int r = 0; r < gray.rows(); ++r)
        for (int c = 0; c < gray.cols(); ++c)
            map.set(r, c, gray(r, c) > threshold ? 255 : 0);
    return map;
}

void save_grayscale(const std::string& path, const Grid& image) {
    cv::Mat mat(image.rows(), image.cols(), CV_8UC1);
    for (int r = 0; r < image.rows(); ++r) {
        for (int c = 0; c < image.cols(); ++c) {
            const double v = std::clamp(image(r, c), 0.0, 255.0);
            mat.at<std::uint8_t>(r, c) =
                static_cast<std::uint8_t>(std::lround(v));
        }
    }
    if (!cv::imwrite(path, mat))
        throw std::runtime_error("cannot write image: " + path);
}

void save_binary(const std::string& path, const BinaryMap& map) {
    cv::Mat mat(map.rows(), map.cols(), CV_8UC1);
    for (int r = 0; r < map.rows(); ++r)
        for (int c = 0; c < map.cols(); ++c)
            mat.at<std::uint8_t>(r, c) = map.at(r, c);
    if (!cv::imwrite(path, mat))
        throw std::runtime_error("cannot write image: " + path);
}

} // namespace edcssm
