#pragma once

#include <string>

#include "edcssm/grid.hpp"

namespace edcssm {

// Decodes an 8-bit image file to a grayscale intensity grid in [0, 255].
// Color inputs are reduced with the standard luminance weights
// (0.299 R + 0.587 G + 0.114 B) in floating point. Throws std::runtime_error
// (naming the path) when the file is missing, cannot be decoded, or has an
// unsupported bit depth.
Grid load_grayscale(const std::string& path);

// Decodes an image as a binary edge map: luminance strictly above
// `threshold` becomes 255, everything else 0.
BinaryMap load_binary(const std::string& path, double threshold = 127.0);

// Writes an 8-bit single-channel image; values are clamped to [0, 255] and
// rounded. Throws std::runtime_error on encode/write failure.
void save_grayscale(const std::string& path, const Grid& image);
void save_binary(const std::string& path, const BinaryMap& map);

} // namespace edcssm
