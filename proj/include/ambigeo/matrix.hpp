#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ambigeo/error.hpp"

namespace ambigeo {

/// Dense row-major matrix with value semantics.
template <typename T>
class BasicMatrix {
public:
    BasicMatrix() = default;
    BasicMatrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    BasicMatrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw Error(ErrorCode::Shape, "matrix data length does not match rows*cols");
        }
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<T>& data() noexcept { return data_; }
    const std::vector<T>& data() const noexcept { return data_; }

    bool operator==(const BasicMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = BasicMatrix<double>;
using FloatMatrix = BasicMatrix<float>;

template <typename To, typename From>
BasicMatrix<To> matrix_cast(const BasicMatrix<From>& m) {
    std::vector<To> out(m.data().begin(), m.data().end());
    return BasicMatrix<To>(m.rows(), m.cols(), std::move(out));
}

}  // namespace ambigeo
