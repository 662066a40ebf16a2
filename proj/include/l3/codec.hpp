#pragma once

// Single-patch L3 codec: top-row Paeth prediction followed by row-wise
// base-delta bit packing.
//
// Patch bitstream, one record per row, rows bit-contiguous, MSB-first:
//
//   [k : 4 bits][base : 8 bits][delta_0 : k bits] ... [delta_{w-1} : k bits]
//
// The patch is zero-padded to a byte boundary after the last row.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "l3/bit_cursor.hpp"

namespace l3 {

/// One 8-bit channel, row-major.
class PixelPlane {
 public:
  PixelPlane() = default;
  PixelPlane(std::uint32_t width, std::uint32_t height, std::uint8_t fill = 0);
  /// Throws kInvalidArgument when data.size() != width * height.
  PixelPlane(std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> data);

  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  std::span<const std::uint8_t> row(std::uint32_t r) const noexcept {
    return std::span<const std::uint8_t>(data_).subspan(std::size_t{r} * width_, width_);
  }
  std::span<std::uint8_t> row(std::uint32_t r) noexcept {
    return std::span<std::uint8_t>(data_).subspan(std::size_t{r} * width_, width_);
  }

  std::uint8_t operator()(std::uint32_t x, std::uint32_t y) const noexcept {
    return data_[std::size_t{y} * width_ + x];
  }
  std::uint8_t& operator()(std::uint32_t x, std::uint32_t y) noexcept {
    return data_[std::size_t{y} * width_ + x];
  }

  friend bool operator==(const PixelPlane&, const PixelPlane&) = default;

 private:
  std::uint32_t width_ = 0;
  std::uint32_t height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Output of the Paeth stage. Row 0 holds source pixels verbatim; every other
/// row holds (pixel - prediction) mod 256.
struct ResidualPatch {
  PixelPlane residuals;
};

/// Base-delta record of one row.
struct RowRecord {
  std::uint8_t k = 1;     // bits per delta, 1..8
  std::uint8_t base = 0;  // row minimum
  std::vector<std::uint8_t> deltas;

  friend bool operator==(const RowRecord&, const RowRecord&) = default;
};

enum class Neighbor : std::uint8_t { kTopLeft, kTop, kTopRight };

/// Picks the neighbor closest to top_left + top_right - top. Missing
/// neighbors are replaced with `top`; ties resolve top-left, top, top-right.
Neighbor select_neighbor(std::optional<std::uint8_t> top_left, std::uint8_t top,
                         std::optional<std::uint8_t> top_right);

std::uint8_t predict_pixel(std::optional<std::uint8_t> top_left, std::uint8_t top,
                           std::optional<std::uint8_t> top_right);

ResidualPatch paeth_filter(const PixelPlane& patch);

/// Reconstructs one row from the previous decoded row and its residuals.
/// Throws kInvalidArgument on length mismatch.
std::vector<std::uint8_t> paeth_unfilter_row(std::span<const std::uint8_t> prev_row,
                                             std::span<const std::uint8_t> residual_row);

/// In-place variant used by the decoders. `rowwise` selects the branch-free
/// whole-row kernel; otherwise each pixel goes through predict_pixel.
void paeth_unfilter_row(std::span<const std::uint8_t> prev_row,
                        std::span<const std::uint8_t> residual_row,
                        std::span<std::uint8_t> out, bool rowwise);

/// Throws kInvalidArgument on an empty row.
RowRecord bd_encode_row(std::span<const std::uint8_t> row);

/// Appends 4 + 8 + k * deltas.size() bits.
void bd_write_row(BitWriter& writer, const RowRecord& record);

/// Reads one row record of `row_width` pixels and returns base + delta.
/// Throws kCorruptStream for k outside 1..8 or base + delta > 255,
/// kTruncatedStream when the record runs past the buffer.
std::vector<std::uint8_t> bd_decode_row(BitReader& reader, std::size_t row_width);

/// Decodes into `out` (row width = out.size()). `pixelwise` extracts each
/// delta from its own bit offset instead of walking the cursor.
void bd_decode_row(BitReader& reader, std::span<std::uint8_t> out, bool pixelwise);

/// Bit length of one row record with bit width k.
constexpr std::size_t row_record_bits(unsigned k, std::size_t row_width) {
  return 12 + std::size_t{k} * row_width;
}

/// Encodes a patch of 1..255 x 1..255 pixels. Throws kInvalidArgument otherwise.
std::vector<std::uint8_t> encode_patch(const PixelPlane& patch);

/// Inner-loop variants of the decoder. Every combination produces the same
/// pixels; they differ only in how the work inside a row is expressed.
struct DecodeMode {
  bool paeth_rowwise = false;
  bool bd_pixelwise = false;
};

/// Writable rectangle inside a larger plane.
struct PlaneRegion {
  std::span<std::uint8_t> data;  // starts at the region's top-left pixel
  std::size_t stride = 0;        // distance between rows, in bytes
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  std::span<std::uint8_t> row(std::uint32_t r) const noexcept {
    return data.subspan(std::size_t{r} * stride, width);
  }
};

PlaneRegion region_of(PixelPlane& plane, std::uint32_t x0, std::uint32_t y0,
                      std::uint32_t width, std::uint32_t height);

/// Decodes a patch bitstream into `out`. Bits after the last row are ignored.
void decode_patch_into(std::span<const std::uint8_t> bytes, const PlaneRegion& out,
                       DecodeMode mode = {});

PixelPlane decode_patch(std::span<const std::uint8_t> bytes, std::uint32_t width,
                        std::uint32_t height);

}  // namespace l3
