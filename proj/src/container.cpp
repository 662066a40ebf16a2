#include "l3/container.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "l3/error.hpp"

namespace l3 {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t pos) {
  return static_cast<std::uint32_t>(in[pos]) | static_cast<std::uint32_t>(in[pos + 1]) << 8 |
         static_cast<std::uint32_t>(in[pos + 2]) << 16 |
         static_cast<std::uint32_t>(in[pos + 3]) << 24;
}

std::uint64_t grid_patches(std::uint32_t width, std::uint32_t height, std::uint32_t n) {
  return std::uint64_t{ceil_div(width, n)} * ceil_div(height, n);
}

Error header_error(const std::string& what) { return Error(ErrorCode::kCorruptHeader, what); }

}  // namespace

RawImage::RawImage(std::uint32_t w, std::uint32_t h) : width(w), height(h) {
  for (auto& p : planes) p = PixelPlane(w, h);
}

std::uint32_t L3Header::grid_cols() const noexcept {
  return patch_size == 0 ? 0 : ceil_div(width, patch_size);
}
std::uint32_t L3Header::grid_rows() const noexcept {
  return patch_size == 0 ? 0 : ceil_div(height, patch_size);
}
std::size_t L3Header::patches_per_channel() const noexcept {
  return std::size_t{grid_cols()} * grid_rows();
}
std::size_t L3Header::byte_size() const noexcept { return header_bytes(patches_per_channel()); }

std::uint8_t choose_patch_size(std::uint32_t width, std::uint32_t height) {
  const std::uint64_t area = std::uint64_t{width} * height;
  if (area < 1080ull * 720) return 32;
  if (area < 1920ull * 1080) return 64;
  return 128;
}

std::vector<PatchRect> partition(std::uint32_t width, std::uint32_t height,
                                 std::uint32_t patch_size) {
  if (patch_size == 0) throw Error(ErrorCode::kInvalidArgument, "patch size must be >= 1");
  std::vector<PatchRect> rects;
  rects.reserve(grid_patches(width, height, patch_size));
  for (std::uint32_t y = 0; y < height; y += patch_size)
    for (std::uint32_t x = 0; x < width; x += patch_size)
      rects.push_back({x, y, std::min(patch_size, width - x), std::min(patch_size, height - y)});
  return rects;
}

std::vector<std::uint8_t> serialize_header(const L3Header& header) {
  const std::size_t p = header.patches_per_channel();
  for (const auto& table : header.offsets)
    if (table.size() != p)
      throw Error(ErrorCode::kInvalidArgument, "offset table size does not match patch grid");
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.reserve(header_bytes(p));
  put_u32(out, header.width);
  put_u32(out, header.height);
  out.push_back(header.patch_size);
  for (const auto& table : header.offsets)
    for (std::uint32_t off : table) put_u32(out, off);
  return out;
}

L3Header parse_header(std::span<const std::uint8_t> file) {
  if (file.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), file.begin()))
    throw Error(ErrorCode::kUnrecognizedFormat, "missing L3IF signature");
  if (file.size() < kFixedHeaderBytes) throw header_error("header shorter than 13 bytes");

  L3Header h;
  h.width = get_u32(file, 4);
  h.height = get_u32(file, 8);
  h.patch_size = file[12];
  if (h.width == 0 || h.height == 0)
    throw header_error("zero image dimension " + std::to_string(h.width) + "x" +
                       std::to_string(h.height));
  if (h.patch_size == 0) throw header_error("patch size is 0");

  const std::uint64_t p = grid_patches(h.width, h.height, h.patch_size);
  if (p > (file.size() - kFixedHeaderBytes) / (4 * kChannels))
    throw header_error("offset tables (" + std::to_string(p) +
                       " patches per channel) exceed file size");
  const std::size_t data_start = header_bytes(p);
  const std::size_t data_bytes = file.size() - data_start;

  std::size_t pos = kFixedHeaderBytes;
  std::int64_t prev = -1;
  for (int c = 0; c < kChannels; ++c) {
    auto& table = h.offsets[c];
    table.resize(p);
    for (std::size_t i = 0; i < p; ++i, pos += 4) {
      table[i] = get_u32(file, pos);
      const std::string where = std::string("offset ") + channel_name(c) + "[" +
                                std::to_string(i) + "] = " + std::to_string(table[i]);
      if (c == 0 && i == 0 && table[i] != 0) throw header_error(where + ", expected 0");
      if (static_cast<std::int64_t>(table[i]) <= prev)
        throw header_error(where + " is not increasing");
      if (table[i] >= data_bytes)
        throw header_error(where + " beyond data section of " + std::to_string(data_bytes) +
                           " bytes");
      prev = table[i];
    }
  }
  return h;
}

PatchSpan patch_span(const L3Header& header, int channel, std::size_t index,
                     std::size_t data_bytes) {
  const std::size_t p = header.patches_per_channel();
  PatchSpan s;
  s.begin = header.offsets[channel][index];
  if (index + 1 < p)
    s.end = header.offsets[channel][index + 1];
  else if (channel + 1 < kChannels)
    s.end = header.offsets[channel + 1][0];
  else
    s.end = data_bytes;
  return s;
}

std::vector<std::uint8_t> encode_image(const RawImage& image,
                                       std::optional<std::uint8_t> patch_size) {
  if (image.width == 0 || image.height == 0)
    throw Error(ErrorCode::kInvalidArgument, "image has a zero dimension");
  for (const auto& plane : image.planes)
    if (plane.width() != image.width || plane.height() != image.height)
      throw Error(ErrorCode::kInvalidArgument, "plane dimensions differ from image");
  const std::uint8_t n = patch_size.value_or(choose_patch_size(image.width, image.height));
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "patch size must be >= 1");

  const auto rects = partition(image.width, image.height, n);
  L3Header header{image.width, image.height, n, {}};
  std::vector<std::uint8_t> data;
  for (int c = 0; c < kChannels; ++c) {
    header.offsets[c].reserve(rects.size());
    for (const PatchRect& r : rects) {
      PixelPlane patch(r.width, r.height);
      for (std::uint32_t y = 0; y < r.height; ++y) {
        const auto src = image.planes[c].row(r.y0 + y).subspan(r.x0, r.width);
        std::copy(src.begin(), src.end(), patch.row(y).begin());
      }
      const auto bytes = encode_patch(patch);
      if (data.size() > UINT32_MAX)
        throw Error(ErrorCode::kInvalidArgument, "data section exceeds 32-bit offsets");
      header.offsets[c].push_back(static_cast<std::uint32_t>(data.size()));
      data.insert(data.end(), bytes.begin(), bytes.end());
    }
  }
  auto out = serialize_header(header);
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

RawImage decode_image(std::span<const std::uint8_t> file) {
  const L3Header header = parse_header(file);
  const auto data = file.subspan(header.byte_size());
  const auto rects = partition(header.width, header.height, header.patch_size);
  RawImage image(header.width, header.height);
  for (int c = 0; c < kChannels; ++c) {
    for (std::size_t i = 0; i < rects.size(); ++i) {
      const PatchRect& r = rects[i];
      const PatchSpan s = patch_span(header, c, i, data.size());
      try {
        decode_patch_into(data.subspan(s.begin, s.end - s.begin),
                          region_of(image.planes[c], r.x0, r.y0, r.width, r.height));
      } catch (const Error& e) {
        throw e.at({c, i});
      }
    }
  }
  return image;
}

InspectReport inspect(std::span<const std::uint8_t> file) {
  InspectReport rep;
  rep.magic_ok =
      file.size() >= kMagic.size() && std::equal(kMagic.begin(), kMagic.end(), file.begin());
  if (!rep.magic_ok) rep.problems.push_back("magic: expected \"L3IF\"");
  if (file.size() < kFixedHeaderBytes) {
    rep.problems.push_back("header: file is " + std::to_string(file.size()) +
                           " bytes, fixed header needs 13");
    return rep;
  }
  rep.width = get_u32(file, 4);
  rep.height = get_u32(file, 8);
  rep.patch_size = file[12];
  if (*rep.width == 0) rep.problems.push_back("width: 0");
  if (*rep.height == 0) rep.problems.push_back("height: 0");
  if (*rep.patch_size == 0) rep.problems.push_back("patch_size: 0");
  if (!rep.problems.empty()) return rep;

  const std::uint64_t p = grid_patches(*rep.width, *rep.height, *rep.patch_size);
  rep.grid_cols = ceil_div(*rep.width, *rep.patch_size);
  rep.grid_rows = ceil_div(*rep.height, *rep.patch_size);
  rep.patches_per_channel = p;
  if (p > (file.size() - kFixedHeaderBytes) / (4 * kChannels)) {
    rep.problems.push_back("offsets: " + std::to_string(p) +
                           " patches per channel do not fit in the file");
    return rep;
  }
  rep.header_bytes = header_bytes(p);
  rep.data_bytes = file.size() - rep.header_bytes;

  L3Header header;
  try {
    header = parse_header(file);
  } catch (const Error& e) {
    rep.problems.push_back(std::string("offsets: ") + e.what());
    return rep;
  }

  for (int c = 0; c < kChannels; ++c) {
    for (std::size_t i = 0; i < p; ++i) {
      const PatchSpan s = patch_span(header, c, i, rep.data_bytes);
      const std::size_t size = s.end - s.begin;
      rep.channel_bytes[c] += size;
      const std::size_t lower = size == 0 ? 0 : std::bit_floor(size);
      const std::size_t upper = size == 0 ? 1 : lower * 2;
      auto it = std::find_if(rep.histogram.begin(), rep.histogram.end(),
                             [&](const auto& b) { return b.lower == lower; });
      if (it == rep.histogram.end()) {
        rep.histogram.push_back({lower, upper, 0, 0});
        it = rep.histogram.end() - 1;
      }
      ++it->count;
      it->bytes += size;
    }
  }
  std::sort(rep.histogram.begin(), rep.histogram.end(),
            [](const auto& a, const auto& b) { return a.lower < b.lower; });
  return rep;
}

std::string format_report(const InspectReport& rep) {
  std::ostringstream os;
  os << "magic:       " << (rep.magic_ok ? "L3IF (ok)" : "INVALID") << '\n';
  if (rep.width) os << "width:       " << *rep.width << '\n';
  if (rep.height) os << "height:      " << *rep.height << '\n';
  if (rep.patch_size) os << "patch_size:  N=" << int{*rep.patch_size} << '\n';
  if (rep.patches_per_channel) {
    os << "grid:        " << rep.grid_cols << "x" << rep.grid_rows
       << " (P=" << rep.patches_per_channel << " per channel)\n";
  }
  if (rep.header_bytes) {
    os << "header:      " << rep.header_bytes << " bytes\n";
    os << "data:        " << rep.data_bytes << " bytes\n";
  }
  if (rep.ok()) {
    for (int c = 0; c < kChannels; ++c)
      os << "channel " << channel_name(c) << ":   " << rep.channel_bytes[c] << " bytes\n";
    os << "patch sizes:\n";
    for (const auto& b : rep.histogram)
      os << "  [" << b.lower << ", " << b.upper << "): " << b.count << " patches, " << b.bytes
         << " bytes\n";
  }
  for (const auto& p : rep.problems) os << "problem:     " << p << '\n';
  return os.str();
}

}  // namespace l3
