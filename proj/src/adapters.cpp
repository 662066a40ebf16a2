#include "l3/adapters.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>

#include "l3/error.hpp"

#ifdef L3_HAVE_PNG
#include <png.h>
#endif

namespace l3 {

namespace {

class HeaderScanner {
 public:
  explicit HeaderScanner(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint64_t number(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
      throw Error(ErrorCode::kUnsupportedInput, std::string("PPM: expected ") + what);
    std::uint64_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > UINT32_MAX)
        throw Error(ErrorCode::kUnsupportedInput, std::string("PPM: ") + what + " too large");
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

InterleavedImage read_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6')
    throw Error(ErrorCode::kUnsupportedInput, "not a binary PPM (P6)");
  HeaderScanner scan(bytes);
  scan.advance(2);
  const auto width = scan.number("width");
  const auto height = scan.number("height");
  const auto maxval = scan.number("maxval");
  if (width == 0 || height == 0)
    throw Error(ErrorCode::kUnsupportedInput, "PPM: zero dimension");
  if (maxval != 255)
    throw Error(ErrorCode::kUnsupportedInput,
                "PPM: maxval " + std::to_string(maxval) + " unsupported, need 255");
  if (scan.pos() >= bytes.size() || !std::isspace(bytes[scan.pos()]))
    throw Error(ErrorCode::kUnsupportedInput, "PPM: missing whitespace after maxval");
  scan.advance(1);

  const std::size_t available = bytes.size() - scan.pos();
  if (width * height > available / 3)
    throw Error(ErrorCode::kUnsupportedInput,
                "PPM: payload truncated, " + std::to_string(available) + " of " +
                    std::to_string(width * height * 3) + " bytes");
  const std::size_t payload = static_cast<std::size_t>(width * height * 3);
  InterleavedImage img;
  img.width = static_cast<std::uint32_t>(width);
  img.height = static_cast<std::uint32_t>(height);
  const auto first = bytes.begin() + static_cast<std::ptrdiff_t>(scan.pos());
  img.data.assign(first, first + static_cast<std::ptrdiff_t>(payload));
  return img;
}

std::vector<std::uint8_t> write_ppm(const InterleavedImage& image) {
  const std::string header =
      "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.data.begin(), image.data.end());
  return out;
}

RawImage planarize(const InterleavedImage& image) {
  RawImage out(image.width, image.height);
  const std::size_t n = std::size_t{image.width} * image.height;
  for (int c = 0; c < kChannels; ++c) {
    auto dst = out.planes[c].data();
    for (std::size_t i = 0; i < n; ++i) dst[i] = image.data[i * 3 + c];
  }
  return out;
}

InterleavedImage interleave(const RawImage& image) {
  InterleavedImage out{image.width, image.height, {}};
  const std::size_t n = std::size_t{image.width} * image.height;
  out.data.resize(n * 3);
  for (int c = 0; c < kChannels; ++c) {
    const auto src = image.planes[c].data();
    for (std::size_t i = 0; i < n; ++i) out.data[i * 3 + c] = src[i];
  }
  return out;
}

#ifdef L3_HAVE_PNG

bool png_available() noexcept { return true; }

std::vector<std::uint8_t> encode_png(const InterleavedImage& image) {
  png_image desc{};
  desc.version = PNG_IMAGE_VERSION;
  desc.width = image.width;
  desc.height = image.height;
  desc.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&desc, nullptr, &size, 0, image.data.data(), 0, nullptr))
    throw Error(ErrorCode::kUnsupportedInput, std::string("PNG encode: ") + desc.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&desc, out.data(), &size, 0, image.data.data(), 0, nullptr))
    throw Error(ErrorCode::kUnsupportedInput, std::string("PNG encode: ") + desc.message);
  out.resize(size);
  return out;
}

InterleavedImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image desc{};
  desc.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&desc, bytes.data(), bytes.size()))
    throw Error(ErrorCode::kUnsupportedInput, std::string("PNG decode: ") + desc.message);
  desc.format = PNG_FORMAT_RGB;
  InterleavedImage img{desc.width, desc.height, {}};
  img.data.resize(PNG_IMAGE_SIZE(desc));
  if (!png_image_finish_read(&desc, nullptr, img.data.data(), 0, nullptr)) {
    png_image_free(&desc);
    throw Error(ErrorCode::kUnsupportedInput, std::string("PNG decode: ") + desc.message);
  }
  return img;
}

#else

bool png_available() noexcept { return false; }

std::vector<std::uint8_t> encode_png(const InterleavedImage&) {
  throw Error(ErrorCode::kFeatureDisabled, "built without PNG support");
}

InterleavedImage decode_png(std::span<const std::uint8_t>) {
  throw Error(ErrorCode::kFeatureDisabled, "built without PNG support");
}

#endif

std::size_t baseline_compressed_size(const RawImage& image, BaselineFormat format) {
  switch (format) {
    case BaselineFormat::kPng: return encode_png(interleave(image)).size();
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown baseline format");
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

RawImage load_image(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  const auto bytes = read_file(path);
  if (ext == ".png") return planarize(decode_png(bytes));
  return planarize(read_ppm(bytes));
}

}  // namespace l3
