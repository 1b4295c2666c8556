#include "robsel/ptns.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "robsel/error.hpp"

namespace robsel {

namespace {

constexpr char kMagic[4] = {'P', 'T', 'N', 'S'};
constexpr std::size_t kHeaderSize = 7;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(in[at + k]) << (8 * k);
  return v;
}

std::size_t checked_count(std::span<const std::uint32_t> dims) {
  std::size_t n = 1;
  for (std::uint32_t d : dims) {
    if (d != 0 && n > std::numeric_limits<std::size_t>::max() / d) {
      fail(ErrorCategory::FileFormat, "tensor dimensions overflow");
    }
    n *= d;
  }
  return n;
}

}  // namespace

std::size_t dtype_size(DType dtype) noexcept { return dtype == DType::Float32 ? 4 : 1; }

PortableTensor PortableTensor::float32(std::vector<std::uint32_t> dims, std::vector<float> values) {
  PortableTensor t;
  t.dtype = DType::Float32;
  t.dims = std::move(dims);
  t.f32 = std::move(values);
  if (t.f32.size() != t.element_count()) {
    fail(ErrorCategory::DimensionMismatch, "float32 payload does not match dims");
  }
  return t;
}

PortableTensor PortableTensor::uint8(std::vector<std::uint32_t> dims, std::vector<std::uint8_t> values) {
  PortableTensor t;
  t.dtype = DType::UInt8;
  t.dims = std::move(dims);
  t.u8 = std::move(values);
  if (t.u8.size() != t.element_count()) {
    fail(ErrorCategory::DimensionMismatch, "uint8 payload does not match dims");
  }
  return t;
}

std::size_t PortableTensor::element_count() const { return checked_count(dims); }

double PortableTensor::value(std::size_t i) const {
  return dtype == DType::Float32 ? static_cast<double>(f32[i]) : static_cast<double>(u8[i]);
}

std::vector<std::uint8_t> encode_ptns(const PortableTensor& tensor) {
  if (tensor.dims.size() > 255) fail(ErrorCategory::InvalidArgument, "tensor rank exceeds 255");
  const std::size_t n = tensor.element_count();
  const std::size_t stored = tensor.dtype == DType::Float32 ? tensor.f32.size() : tensor.u8.size();
  if (stored != n) fail(ErrorCategory::DimensionMismatch, "payload does not match dims");

  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + 4 * tensor.dims.size() + n * dtype_size(tensor.dtype));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kPtnsVersion);
  out.push_back(static_cast<std::uint8_t>(tensor.dtype));
  out.push_back(static_cast<std::uint8_t>(tensor.dims.size()));
  for (std::uint32_t d : tensor.dims) put_u32(out, d);
  if (tensor.dtype == DType::Float32) {
    for (float f : tensor.f32) put_u32(out, std::bit_cast<std::uint32_t>(f));
  } else {
    out.insert(out.end(), tensor.u8.begin(), tensor.u8.end());
  }
  return out;
}

PortableTensor decode_ptns(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) fail(ErrorCategory::FileFormat, "truncated tensor header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) fail(ErrorCategory::FileFormat, "bad tensor magic");
  if (bytes[4] != kPtnsVersion) {
    fail(ErrorCategory::FileFormat, "unsupported tensor version " + std::to_string(bytes[4]));
  }
  if (bytes[5] > 1) fail(ErrorCategory::FileFormat, "unknown dtype code " + std::to_string(bytes[5]));
  PortableTensor t;
  t.dtype = static_cast<DType>(bytes[5]);
  const std::size_t ndim = bytes[6];
  if (bytes.size() < kHeaderSize + 4 * ndim) fail(ErrorCategory::FileFormat, "truncated tensor dims");
  for (std::size_t k = 0; k < ndim; ++k) t.dims.push_back(get_u32(bytes, kHeaderSize + 4 * k));
  const std::size_t n = checked_count(t.dims);
  const std::size_t offset = kHeaderSize + 4 * ndim;
  if (n > (bytes.size() - offset) / dtype_size(t.dtype) ||
      bytes.size() - offset != n * dtype_size(t.dtype)) {
    fail(ErrorCategory::FileFormat, "tensor payload is " + std::to_string(bytes.size() - offset) +
                                        " bytes, expected " + std::to_string(n * dtype_size(t.dtype)));
  }
  if (t.dtype == DType::Float32) {
    t.f32.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.f32[i] = std::bit_cast<float>(get_u32(bytes, offset + 4 * i));
  } else {
    t.u8.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset), bytes.end());
  }
  return t;
}

void write_ptns(const std::filesystem::path& path, const PortableTensor& tensor) {
  const auto bytes = encode_ptns(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCategory::Io, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCategory::Io, "failed writing '" + path.string() + "'");
}

PortableTensor read_ptns(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::Io, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_ptns(bytes);
  } catch (const Error& e) {
    throw Error(e.category(), path.string() + ": " + e.what());
  }
}

}  // namespace robsel
