#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace robsel {

/// Portable tensor file:
///
///   offset  size        field
///   0       4           magic "PTNS"
///   4       1           version (1)
///   5       1           dtype (0 = float32, 1 = uint8)
///   6       1           ndim
///   7       4 * ndim    dims, little-endian u32
///   ...     prod(dims) * sizeof(dtype)   row-major little-endian payload
enum class DType : std::uint8_t { Float32 = 0, UInt8 = 1 };

inline constexpr std::uint8_t kPtnsVersion = 1;

std::size_t dtype_size(DType dtype) noexcept;

struct PortableTensor {
  DType dtype = DType::Float32;
  std::vector<std::uint32_t> dims;
  std::vector<float> f32;         ///< payload when dtype == Float32
  std::vector<std::uint8_t> u8;   ///< payload when dtype == UInt8

  static PortableTensor float32(std::vector<std::uint32_t> dims, std::vector<float> values);
  static PortableTensor uint8(std::vector<std::uint32_t> dims, std::vector<std::uint8_t> values);

  std::size_t element_count() const;
  std::size_t rank() const { return dims.size(); }

  /// Element i widened to double regardless of dtype.
  double value(std::size_t i) const;

  friend bool operator==(const PortableTensor&, const PortableTensor&) = default;
};

std::vector<std::uint8_t> encode_ptns(const PortableTensor& tensor);
PortableTensor decode_ptns(std::span<const std::uint8_t> bytes);

void write_ptns(const std::filesystem::path& path, const PortableTensor& tensor);
PortableTensor read_ptns(const std::filesystem::path& path);

}  // namespace robsel
