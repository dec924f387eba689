// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seco/error.hpp"

namespace seco {

/// Dense row-major matrix. Float storage is the embedding interchange width;
/// double is used for score tables and assignment matrices.
///
/// Construction validates the shape and rejects NaN/Inf, so every Matrix in
/// the system is finite and downstream code does not re-check.
template <typename T>
class BasicMatrix {
public:
    using value_type = T;

    BasicMatrix() = default;
    BasicMatrix(std::size_t rows, std::size_t cols);
    BasicMatrix(std::size_t rows, std::size_t cols, std::vector<T> data);

    static BasicMatrix from_rows(const std::vector<std::vector<T>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<const T> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    T operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    std::span<const T> data() const noexcept { return data_; }

    /// Rows at the given indices, in the given order.
    BasicMatrix gather(std::span<const std::size_t> indices) const;

    friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = BasicMatrix<float>;
using MatrixD = BasicMatrix<double>;

extern template class BasicMatrix<float>;
extern template class BasicMatrix<double>;

/// Encoder output split into context and query rows sharing one width d.
class HiddenStates {
public:
    HiddenStates(Matrix context, Matrix query);

    const Matrix& context() const noexcept { return context_; }
    const Matrix& query() const noexcept { return query_; }
    std::size_t n_context() const noexcept { return context_.rows(); }
    std::size_t n_query() const noexcept { return query_.rows(); }
    std::size_t dim() const noexcept { return context_.cols(); }

private:
    Matrix context_;
    Matrix query_;
};

/// Guard added to every cosine denominator so zero vectors map to 0.
inline constexpr double kNormEpsilon = 1e-12;

double dot(std::span<const float> a, std::span<const float> b);
double dot(std::span<const float> a, std::span<const double> b);
double norm(std::span<const float> a);
double norm(std::span<const double> a);

/// a.b / (|a||b| + eps), clamped to [-1, 1]. Accumulates in double.
double cosine_similarity(std::span<const float> a, std::span<const float> b);
double cosine_similarity(std::span<const float> a, std::span<const double> b);

/// Column-wise arithmetic mean of all rows.
std::vector<double> mean_pool(const Matrix& rows);

/// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> w);

} // namespace seco
