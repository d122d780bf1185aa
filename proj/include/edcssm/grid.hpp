#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace edcssm {

// Dense row-major grid of doubles. Used for images, state tiles, gradient
// fields and magnitude maps alike.
class Grid {
public:
    Grid() = default;
    Grid(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(check_size(rows, cols), fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& at(int r, int c) { return data_[index(r, c)]; }
    double at(int r, int c) const { return data_[index(r, c)]; }
    double& operator()(int r, int c) { return at(r, c); }
    double operator()(int r, int c) const { return at(r, c); }

    bool in_bounds(int r, int c) const {
        return r >= 0 && r < rows_ && c >= 0 && c < cols_;
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Grid& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    static std::size_t check_size(int rows, int cols) {
        if (rows < 0 || cols < 0)
            throw std::invalid_argument("Grid: negative dimensions");
        if ((rows == 0) != (cols == 0))
            throw std::invalid_argument("Grid: one dimension zero, the other not");
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }
    std::size_t index(int r, int c) const {
        if (!in_bounds(r, c))
            throw std::out_of_range("Grid: index out of range");
        return static_cast<std::size_t>(r) * cols_ + c;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// Binary edge map: values are strictly 0 or 255.
class BinaryMap {
public:
    BinaryMap() = default;
    BinaryMap(int rows, int cols, std::uint8_t fill = 0)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * cols, check_value(fill)) {
        if (rows < 0 || cols < 0)
            throw std::invalid_argument("BinaryMap: negative dimensions");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    bool is_edge(int r, int c) const { return at(r, c) != 0; }
    std::uint8_t at(int r, int c) const { return data_[index(r, c)]; }
    void set(int r, int c, std::uint8_t value) { data_[index(r, c)] = check_value(value); }

    bool in_bounds(int r, int c) const {
        return r >= 0 && r < rows_ && c >= 0 && c < cols_;
    }

    std::size_t edge_count() const {
        std::size_t n = 0;
        for (std::uint8_t v : data_) n += (v != 0);
        return n;
    }

    const std::vector<std::uint8_t>& data() const { return data_; }

    friend bool operator==(const BinaryMap& a, const BinaryMap& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    static std::uint8_t check_value(std::uint8_t v) {
        if (v != 0 && v != 255)
            throw std::invalid_argument("BinaryMap: values must be 0 or 255");
        return v;
    }
    std::size_t index(int r, int c) const {
        if (!in_bounds(r, c))
            throw std::out_of_range("BinaryMap: index out of range");
        return static_cast<std::size_t>(r) * cols_ + c;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::uint8_t> data_;
};

struct PixelCoord {
    int row = 0;
    int col = 0;
    friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
    friend auto operator<=>(const PixelCoord&, const PixelCoord&) = default;
};

} // namespace edcssm
