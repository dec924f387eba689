// SPDX-License-Identifier: Apache-2.0
#include "seco/tensor_file.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <type_traits>
#include <string>

namespace seco {

namespace {

constexpr std::uint8_t kMagic[4] = {'S', 'E', 'C', 'O'};
constexpr std::size_t kHeaderFixed = 12;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    const U bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        bits |= static_cast<U>(bytes[offset + i]) << (8 * i);
    }
    return std::bit_cast<T>(bits);
}

[[noreturn]] void fail(std::size_t offset, const std::string& what) {
    throw Error(ErrorKind::Format, "tensor file: " + what + " at byte offset " + std::to_string(offset));
}

void need(std::span<const std::uint8_t> bytes, std::size_t offset, std::size_t count,
          const char* what) {
    if (bytes.size() < offset || bytes.size() - offset < count) {
        fail(bytes.size(), std::string("truncated ") + what + " (expected " + std::to_string(count) +
                               " bytes from offset " + std::to_string(offset) + ")");
    }
}

} // namespace

std::vector<std::uint8_t> encode_tensor(const TensorData& t) {
    std::uint64_t count = 1;
    for (std::uint64_t d : t.dims) {
        count *= d;
    }
    if (count != t.values.size()) {
        throw Error(ErrorKind::Dimension, "tensor dims do not match value count");
    }
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderFixed + 8 * t.dims.size() + 4 * t.values.size());
    for (std::uint8_t b : kMagic) {
        out.push_back(b);
    }
    put_le<std::uint32_t>(out, kTensorFileVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.dims.size()));
    for (std::uint64_t d : t.dims) {
        put_le<std::uint64_t>(out, d);
    }
    for (float v : t.values) {
        put_le<float>(out, v);
    }
    return out;
}

TensorData decode_tensor(std::span<const std::uint8_t> bytes) {
    need(bytes, 0, 4, "magic");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        fail(0, "bad magic (expected \"SECO\")");
    }
    need(bytes, 4, 4, "version");
    const auto version = get_le<std::uint32_t>(bytes, 4);
    if (version != kTensorFileVersion) {
        fail(4, "unsupported version " + std::to_string(version));
    }
    need(bytes, 8, 4, "ndim");
    const auto ndim = get_le<std::uint32_t>(bytes, 8);

    TensorData t;
    std::size_t offset = kHeaderFixed;
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < ndim; ++i) {
        need(bytes, offset, 8, "dims");
        const auto d = get_le<std::uint64_t>(bytes, offset);
        if (d != 0 && count > (~std::uint64_t{0}) / 4 / d) {
            fail(offset, "dimension product overflows");
        }
        count *= d;
        t.dims.push_back(d);
        offset += 8;
    }
    const std::uint64_t payload = count * 4;
    if (bytes.size() - offset < payload) {
        fail(bytes.size(), "truncated payload (expected " + std::to_string(payload) +
                               " bytes from offset " + std::to_string(offset) + ")");
    }
    if (bytes.size() - offset > payload) {
        fail(offset + payload, "trailing bytes after payload");
    }
    t.values.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        t.values[i] = get_le<float>(bytes, offset + 4 * i);
    }
    return t;
}

std::vector<std::uint8_t> encode_matrix(const Matrix& m) {
    return encode_tensor({{m.rows(), m.cols()}, {m.data().begin(), m.data().end()}});
}

Matrix decode_matrix(std::span<const std::uint8_t> bytes) {
    TensorData t = decode_tensor(bytes);
    const std::size_t payload_start = kHeaderFixed + 8 * t.dims.size();
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        if (!std::isfinite(t.values[i])) {
            fail(payload_start + 4 * i, "non-finite value");
        }
    }
    if (t.dims.size() == 1) {
        return Matrix(1, t.dims[0], std::move(t.values));
    }
    if (t.dims.size() != 2) {
        fail(8, "expected a 1-D or 2-D tensor, got ndim " + std::to_string(t.dims.size()));
    }
    return Matrix(t.dims[0], t.dims[1], std::move(t.values));
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorKind::Io, "failed writing " + path.string());
    }
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_tensor_file(const std::filesystem::path& path, const Matrix& m) {
    write_bytes(path, encode_matrix(m));
}

Matrix read_tensor_file(const std::filesystem::path& path) {
    return decode_matrix(read_bytes(path));
}

} // namespace seco
