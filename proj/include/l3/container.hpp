#pragma once

// L3 file layout (all multi-byte integers little-endian):
//
//   offset  size      field
//   0       4         magic "L3IF"
//   4       4         width
//   8       4         height
//   12      1         patch size N
//   13      4*P       R patch offsets  (P = ceil(width/N) * ceil(height/N))
//   ...     4*P       G patch offsets
//   ...     4*P       B patch offsets
//   13+12P  ...       data section: encoded patches, R then G then B,
//                     row-major patch order, each byte-aligned
//
// Offsets are relative to the start of the data section.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "l3/codec.hpp"

namespace l3 {

inline constexpr std::array<std::uint8_t, 4> kMagic = {'L', '3', 'I', 'F'};
inline constexpr std::size_t kFixedHeaderBytes = 13;
inline constexpr int kChannels = 3;

/// Three-channel 8-bit image stored as R, G, B planes.
struct RawImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::array<PixelPlane, kChannels> planes;

  RawImage() = default;
  /// Zero-filled image.
  RawImage(std::uint32_t width, std::uint32_t height);

  std::size_t raw_bytes() const noexcept {
    return std::size_t{width} * height * kChannels;
  }

  friend bool operator==(const RawImage&, const RawImage&) = default;
};

struct PatchRect {
  std::uint32_t x0 = 0;
  std::uint32_t y0 = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  friend bool operator==(const PatchRect&, const PatchRect&) = default;
};

struct L3Header {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint8_t patch_size = 0;
  std::array<std::vector<std::uint32_t>, kChannels> offsets;

  std::uint32_t grid_cols() const noexcept;
  std::uint32_t grid_rows() const noexcept;
  std::size_t patches_per_channel() const noexcept;
  std::size_t byte_size() const noexcept;

  friend bool operator==(const L3Header&, const L3Header&) = default;
};

constexpr std::size_t header_bytes(std::size_t patches_per_channel) {
  return kFixedHeaderBytes + 4 * kChannels * patches_per_channel;
}

constexpr std::uint32_t ceil_div(std::uint32_t a, std::uint32_t b) {
  return a / b + (a % b != 0 ? 1 : 0);
}

/// Patch size by total pixel count: < 1080x720 -> 32, < 1920x1080 -> 64,
/// otherwise 128.
std::uint8_t choose_patch_size(std::uint32_t width, std::uint32_t height);

/// Row-major tiling with edge patches truncated to the remainder.
std::vector<PatchRect> partition(std::uint32_t width, std::uint32_t height,
                                 std::uint32_t patch_size);

std::vector<std::uint8_t> serialize_header(const L3Header& header);

/// Parses and validates the header at the front of `file`. Offsets must be
/// strictly increasing in R, G, B order, start at 0, and land inside the
/// data section that follows the header in `file`.
L3Header parse_header(std::span<const std::uint8_t> file);

/// Byte range of patch `index` of `channel` inside the data section.
struct PatchSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};
PatchSpan patch_span(const L3Header& header, int channel, std::size_t index,
                     std::size_t data_bytes);

/// Encodes `image`; `patch_size` defaults to choose_patch_size.
std::vector<std::uint8_t> encode_image(const RawImage& image,
                                       std::optional<std::uint8_t> patch_size = std::nullopt);

/// Sequential reference decoder.
RawImage decode_image(std::span<const std::uint8_t> file);

/// Field-by-field report of an L3 file, tolerant of damage.
struct InspectReport {
  bool magic_ok = false;
  std::optional<std::uint32_t> width;
  std::optional<std::uint32_t> height;
  std::optional<std::uint8_t> patch_size;
  std::uint32_t grid_cols = 0;
  std::uint32_t grid_rows = 0;
  std::size_t patches_per_channel = 0;
  std::size_t header_bytes = 0;
  std::size_t data_bytes = 0;
  std::array<std::size_t, kChannels> channel_bytes{};
  /// Patch-size histogram: bucket i counts patches whose size is in
  /// [lower_i, lower_{i+1}).
  struct Bucket {
    std::size_t lower = 0;
    std::size_t upper = 0;  // exclusive
    std::size_t count = 0;
    std::size_t bytes = 0;
  };
  std::vector<Bucket> histogram;
  std::vector<std::string> problems;

  bool ok() const noexcept { return problems.empty(); }
};

InspectReport inspect(std::span<const std::uint8_t> file);
std::string format_report(const InspectReport& report);

}  // namespace l3
