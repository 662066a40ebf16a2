#include "l3/codec.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <string>

#include "l3/error.hpp"

namespace l3 {

namespace {

// Distances are taken to tl + tr - t over plain ints:
//   |tl - ref| = |tr - t|, |t - ref| = |tl + tr - 2t|, |tr - ref| = |tl - t|.
inline std::uint8_t pick(int tl, int t, int tr) {
  const int d_tl = std::abs(tr - t);
  const int d_t = std::abs(tl + tr - 2 * t);
  const int d_tr = std::abs(tl - t);
  if (d_tl <= d_t && d_tl <= d_tr) return static_cast<std::uint8_t>(tl);
  if (d_t <= d_tr) return static_cast<std::uint8_t>(t);
  return static_cast<std::uint8_t>(tr);
}

unsigned bits_for_range(unsigned range) {
  return std::max(1u, static_cast<unsigned>(std::bit_width(range)));
}

void check_patch_dims(std::uint32_t width, std::uint32_t height) {
  if (width < 1 || width > 255 || height < 1 || height > 255)
    throw Error(ErrorCode::kInvalidArgument,
                "patch dimensions must be within 1..255, got " + std::to_string(width) +
                    "x" + std::to_string(height));
}

}  // namespace

PixelPlane::PixelPlane(std::uint32_t width, std::uint32_t height, std::uint8_t fill)
    : width_(width), height_(height), data_(std::size_t{width} * height, fill) {}

PixelPlane::PixelPlane(std::uint32_t width, std::uint32_t height,
                       std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (data_.size() != std::size_t{width} * height)
    throw Error(ErrorCode::kInvalidArgument,
                "plane data holds " + std::to_string(data_.size()) + " bytes, expected " +
                    std::to_string(std::size_t{width} * height));
}

Neighbor select_neighbor(std::optional<std::uint8_t> top_left, std::uint8_t top,
                         std::optional<std::uint8_t> top_right) {
  const int t = top;
  const int tl = top_left.value_or(top);
  const int tr = top_right.value_or(top);
  const int ref = tl + tr - t;
  const int d_tl = std::abs(tl - ref);
  const int d_t = std::abs(t - ref);
  const int d_tr = std::abs(tr - ref);
  if (d_tl <= d_t && d_tl <= d_tr) return Neighbor::kTopLeft;
  if (d_t <= d_tr) return Neighbor::kTop;
  return Neighbor::kTopRight;
}

std::uint8_t predict_pixel(std::optional<std::uint8_t> top_left, std::uint8_t top,
                           std::optional<std::uint8_t> top_right) {
  switch (select_neighbor(top_left, top, top_right)) {
    case Neighbor::kTopLeft: return top_left.value_or(top);
    case Neighbor::kTop: return top;
    case Neighbor::kTopRight: return top_right.value_or(top);
  }
  return top;
}

ResidualPatch paeth_filter(const PixelPlane& patch) {
  ResidualPatch out{patch};
  const std::uint32_t w = patch.width();
  for (std::uint32_t r = 1; r < patch.height(); ++r) {
    const auto prev = patch.row(r - 1);
    const auto cur = patch.row(r);
    auto res = out.residuals.row(r);
    for (std::uint32_t c = 0; c < w; ++c) {
      const auto tl = c > 0 ? std::optional<std::uint8_t>(prev[c - 1]) : std::nullopt;
      const auto tr = c + 1 < w ? std::optional<std::uint8_t>(prev[c + 1]) : std::nullopt;
      res[c] = static_cast<std::uint8_t>(cur[c] - predict_pixel(tl, prev[c], tr));
    }
  }
  return out;
}

void paeth_unfilter_row(std::span<const std::uint8_t> prev_row,
                        std::span<const std::uint8_t> residual_row,
                        std::span<std::uint8_t> out, bool rowwise) {
  if (prev_row.size() != residual_row.size() || out.size() != residual_row.size())
    throw Error(ErrorCode::kInvalidArgument,
                "row length mismatch: prev " + std::to_string(prev_row.size()) +
                    ", residual " + std::to_string(residual_row.size()));
  const std::size_t w = prev_row.size();
  if (w == 0) return;

  if (rowwise) {
    // Border pixels replicate `top` so every column sees three neighbors.
    thread_local std::vector<std::uint8_t> padded;
    padded.resize(w + 2);
    padded[0] = prev_row[0];
    std::copy(prev_row.begin(), prev_row.end(), padded.begin() + 1);
    padded[w + 1] = prev_row[w - 1];
    const std::uint8_t* p = padded.data();
    for (std::size_t c = 0; c < w; ++c)
      out[c] = static_cast<std::uint8_t>(pick(p[c], p[c + 1], p[c + 2]) + residual_row[c]);
    return;
  }

  for (std::size_t c = 0; c < w; ++c) {
    const auto tl = c > 0 ? std::optional<std::uint8_t>(prev_row[c - 1]) : std::nullopt;
    const auto tr = c + 1 < w ? std::optional<std::uint8_t>(prev_row[c + 1]) : std::nullopt;
    out[c] = static_cast<std::uint8_t>(predict_pixel(tl, prev_row[c], tr) + residual_row[c]);
  }
}

std::vector<std::uint8_t> paeth_unfilter_row(std::span<const std::uint8_t> prev_row,
                                             std::span<const std::uint8_t> residual_row) {
  std::vector<std::uint8_t> out(residual_row.size());
  paeth_unfilter_row(prev_row, residual_row, out, false);
  return out;
}

RowRecord bd_encode_row(std::span<const std::uint8_t> row) {
  if (row.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot encode an empty row");
  const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
  RowRecord rec;
  rec.base = *lo;
  rec.k = static_cast<std::uint8_t>(bits_for_range(static_cast<unsigned>(*hi - *lo)));
  rec.deltas.reserve(row.size());
  for (std::uint8_t v : row) rec.deltas.push_back(static_cast<std::uint8_t>(v - rec.base));
  return rec;
}

void bd_write_row(BitWriter& writer, const RowRecord& record) {
  writer.write(record.k, 4);
  writer.write(record.base, 8);
  for (std::uint8_t d : record.deltas) writer.write(d, record.k);
}

void bd_decode_row(BitReader& reader, std::span<std::uint8_t> out, bool pixelwise) {
  const std::size_t width = out.size();
  const std::uint32_t k = reader.read(4);
  if (k == 0 || k > 8)
    throw Error(ErrorCode::kCorruptStream, "row bit width " + std::to_string(k));
  const std::uint32_t base = reader.read(8);
  const std::size_t payload = std::size_t{k} * width;
  if (payload > reader.bits_remaining())
    throw Error(ErrorCode::kTruncatedStream,
                "row needs " + std::to_string(payload) + " delta bits, " +
                    std::to_string(reader.bits_remaining()) + " left");

  std::uint32_t overflow = 0;
  if (pixelwise) {
    const auto buf = reader.buffer();
    const std::size_t start = reader.bit_position();
    for (std::size_t i = 0; i < width; ++i) {
      const std::uint32_t v = base + peek_bits(buf, start + i * k, k);
      overflow |= v;
      out[i] = static_cast<std::uint8_t>(v);
    }
    reader.skip(payload);
  } else {
    for (std::size_t i = 0; i < width; ++i) {
      const std::uint32_t v = base + reader.read(k);
      overflow |= v;
      out[i] = static_cast<std::uint8_t>(v);
    }
  }
  if (overflow > 0xFF)
    throw Error(ErrorCode::kCorruptStream, "base + delta exceeds 255");
}

std::vector<std::uint8_t> bd_decode_row(BitReader& reader, std::size_t row_width) {
  std::vector<std::uint8_t> out(row_width);
  bd_decode_row(reader, out, false);
  return out;
}

std::vector<std::uint8_t> encode_patch(const PixelPlane& patch) {
  check_patch_dims(patch.width(), patch.height());
  const ResidualPatch filtered = paeth_filter(patch);
  BitWriter writer;
  for (std::uint32_t r = 0; r < patch.height(); ++r)
    bd_write_row(writer, bd_encode_row(filtered.residuals.row(r)));
  return std::move(writer).take();
}

PlaneRegion region_of(PixelPlane& plane, std::uint32_t x0, std::uint32_t y0,
                      std::uint32_t width, std::uint32_t height) {
  const std::size_t stride = plane.width();
  const std::size_t first = std::size_t{y0} * stride + x0;
  const std::size_t extent = height == 0 ? 0 : (std::size_t{height} - 1) * stride + width;
  return PlaneRegion{plane.data().subspan(first, extent), stride, width, height};
}

void decode_patch_into(std::span<const std::uint8_t> bytes, const PlaneRegion& out,
                       DecodeMode mode) {
  if (out.width == 0 || out.height == 0) return;
  BitReader reader(bytes);
  thread_local std::vector<std::uint8_t> residual;
  residual.resize(out.width);

  bd_decode_row(reader, out.row(0), mode.bd_pixelwise);
  for (std::uint32_t r = 1; r < out.height; ++r) {
    bd_decode_row(reader, residual, mode.bd_pixelwise);
    paeth_unfilter_row(out.row(r - 1), residual, out.row(r), mode.paeth_rowwise);
  }
}

PixelPlane decode_patch(std::span<const std::uint8_t> bytes, std::uint32_t width,
                        std::uint32_t height) {
  check_patch_dims(width, height);
  PixelPlane plane(width, height);
  decode_patch_into(bytes, region_of(plane, 0, 0, width, height));
  return plane;
}

}  // namespace l3
