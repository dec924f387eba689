// SPDX-License-Identifier: Apache-2.0
//
// Binary tensor container, all integers little-endian:
//
//   offset 0   magic   "SECO"        4 bytes
//   offset 4   version u32 = 1
//   offset 8   ndim    u32
//   offset 12  dims    u64 x ndim
//   then       payload f32 x prod(dims), row-major
//
// Trailing bytes after the payload are rejected.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "seco/tensor.hpp"

namespace seco {

inline constexpr std::uint32_t kTensorFileVersion = 1;

struct TensorData {
    std::vector<std::uint64_t> dims;
    std::vector<float> values;
};

std::vector<std::uint8_t> encode_tensor(const TensorData& t);
TensorData decode_tensor(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_matrix(const Matrix& m);

/// Accepts ndim 2 (rows x cols) or ndim 1 (a single row).
Matrix decode_matrix(std::span<const std::uint8_t> bytes);

void write_tensor_file(const std::filesystem::path& path, const Matrix& m);
Matrix read_tensor_file(const std::filesystem::path& path);

/// Writes bytes to `path`, throwing ErrorKind::Io on failure.
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

} // namespace seco
