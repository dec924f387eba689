// SPDX-License-Identifier: Apache-2.0
#include "seco/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace seco {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::EmptyInput: return "empty input";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::NonFinite: return "non-finite value";
    case ErrorKind::StructuralViolation: return "structural violation";
    case ErrorKind::Format: return "format error";
    case ErrorKind::Overflow: return "numeric overflow";
    case ErrorKind::Io: return "I/O error";
    case ErrorKind::Internal: return "internal error";
    }
    return "unknown error";
}

template <typename T>
BasicMatrix<T>::BasicMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, T{0}) {}

template <typename T>
BasicMatrix<T>::BasicMatrix(std::size_t rows, std::size_t cols, std::vector<T> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorKind::Dimension,
                    "matrix data length " + std::to_string(data_.size()) + " != " +
                        std::to_string(rows_) + " x " + std::to_string(cols_));
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i])) {
            throw Error(ErrorKind::NonFinite,
                        "matrix entry " + std::to_string(i) + " is not finite");
        }
    }
}

template <typename T>
BasicMatrix<T> BasicMatrix<T>::from_rows(const std::vector<std::vector<T>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<T> data;
    data.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) {
            throw Error(ErrorKind::Dimension, "ragged rows in matrix literal");
        }
        data.insert(data.end(), r.begin(), r.end());
    }
    return BasicMatrix(rows.size(), cols, std::move(data));
}

template <typename T>
BasicMatrix<T> BasicMatrix<T>::gather(std::span<const std::size_t> indices) const {
    std::vector<T> out;
    out.reserve(indices.size() * cols_);
    for (std::size_t idx : indices) {
        if (idx >= rows_) {
            throw Error(ErrorKind::InvalidArgument,
                        "row index " + std::to_string(idx) + " out of range");
        }
        auto r = row(idx);
        out.insert(out.end(), r.begin(), r.end());
    }
    return BasicMatrix(indices.size(), cols_, std::move(out));
}

template class BasicMatrix<float>;
template class BasicMatrix<double>;

HiddenStates::HiddenStates(Matrix context, Matrix query)
    : context_(std::move(context)), query_(std::move(query)) {
    if (context_.rows() == 0 || query_.rows() == 0) {
        throw Error(ErrorKind::EmptyInput, "hidden states need at least one context and one query row");
    }
    if (context_.cols() != query_.cols()) {
        throw Error(ErrorKind::Dimension,
                    "context width " + std::to_string(context_.cols()) +
                        " != query width " + std::to_string(query_.cols()));
    }
    if (context_.cols() == 0) {
        throw Error(ErrorKind::EmptyInput, "hidden width must be at least 1");
    }
}

namespace {

template <typename A, typename B>
double dot_impl(std::span<const A> a, std::span<const B> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::Dimension, "vector length mismatch: " + std::to_string(a.size()) +
                                              " vs " + std::to_string(b.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    }
    return acc;
}

template <typename T>
double norm_impl(std::span<const T> a) {
    double acc = 0.0;
    for (T x : a) {
        acc += static_cast<double>(x) * static_cast<double>(x);
    }
    return std::sqrt(acc);
}

template <typename A, typename B>
double cosine_impl(std::span<const A> a, std::span<const B> b) {
    if (a.empty() || a.size() != b.size()) {
        throw Error(ErrorKind::Dimension, "cosine similarity needs equal non-zero lengths, got " +
                                              std::to_string(a.size()) + " and " +
                                              std::to_string(b.size()));
    }
    const double c = dot_impl(a, b) / (norm_impl(a) * norm_impl(b) + kNormEpsilon);
    return std::clamp(c, -1.0, 1.0);
}

} // namespace

double dot(std::span<const float> a, std::span<const float> b) { return dot_impl(a, b); }
double dot(std::span<const float> a, std::span<const double> b) { return dot_impl(a, b); }
double norm(std::span<const float> a) { return norm_impl(a); }
double norm(std::span<const double> a) { return norm_impl(a); }

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
    return cosine_impl(a, b);
}

double cosine_similarity(std::span<const float> a, std::span<const double> b) {
    return cosine_impl(a, b);
}

std::vector<double> mean_pool(const Matrix& rows) {
    if (rows.rows() == 0) {
        throw Error(ErrorKind::EmptyInput, "mean_pool of zero rows");
    }
    std::vector<double> mean(rows.cols(), 0.0);
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        auto r = rows.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            mean[j] += r[j];
        }
    }
    const double n = static_cast<double>(rows.rows());
    for (double& m : mean) {
        m /= n;
    }
    return mean;
}

std::vector<double> softmax(std::span<const double> w) {
    if (w.empty()) {
        throw Error(ErrorKind::EmptyInput, "softmax of empty vector");
    }
    const double hi = *std::max_element(w.begin(), w.end());
    std::vector<double> out(w.size());
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        out[i] = std::exp(w[i] - hi);
        total += out[i];
    }
    for (double& x : out) {
        x /= total;
    }
    return out;
}

} // namespace seco
