#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "l3/container.hpp"

namespace l3 {

/// RGB interleaved, row-major, 8 bits per sample.
struct InterleavedImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> data;  // width * height * 3

  friend bool operator==(const InterleavedImage&, const InterleavedImage&) = default;
};

/// Binary P6 with maxval 255. Comments in the header are skipped.
/// Throws kUnsupportedInput for anything else or a short payload.
InterleavedImage read_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_ppm(const InterleavedImage& image);

RawImage planarize(const InterleavedImage& image);
InterleavedImage interleave(const RawImage& image);

enum class BaselineFormat { kPng };

/// True when the build links an external PNG codec.
bool png_available() noexcept;

/// PNG at the codec's default settings. Throw kFeatureDisabled without PNG.
std::vector<std::uint8_t> encode_png(const InterleavedImage& image);
InterleavedImage decode_png(std::span<const std::uint8_t> bytes);

/// Size of `image` encoded in `format`; used for comparison tables only.
std::size_t baseline_compressed_size(const RawImage& image, BaselineFormat format);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Loads a .ppm (or .png when available) file as planes.
RawImage load_image(const std::filesystem::path& path);

}  // namespace l3
