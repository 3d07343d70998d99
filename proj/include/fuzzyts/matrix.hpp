#ifndef FUZZYTS_MATRIX_HPP
#define FUZZYTS_MATRIX_HPP

#include <cassert>
#include <cstddef>
#include <vector>

namespace fuzzyts {

// Dense row-major matrix of doubles. Just enough for this project.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) {
        assert(r < rows && c < cols);
        return data[r * cols + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        assert(r < rows && c < cols);
        return data[r * cols + c];
    }

    const double* row(std::size_t r) const { return data.data() + r * cols; }
    double* row(std::size_t r) { return data.data() + r * cols; }

    void resize(std::size_t r, std::size_t c, double fill = 0.0) {
        rows = r;
        cols = c;
        data.assign(r * c, fill);
    }
};

}  // namespace fuzzyts

#endif
